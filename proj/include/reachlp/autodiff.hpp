#pragma once

#include <cstddef>
#include <vector>

#include "reachlp/lp_core.hpp"
#include "reachlp/simplex.hpp"

namespace reachlp {

// k directional seeds per differentiable field of a GeneralLP. An empty
// member is shorthand for all-zero seeds of the right shape; a non-empty one
// must mirror the primal shape exactly (columns of dc/db are directions,
// dA_ub[d] / dA_eq[d] is the d-th direction's matrix seed).
struct TangentSeeds {
  std::size_t k = 0;
  Mat dc;                  // n x k
  Mat db_ub;               // m_ub x k
  Mat db_eq;               // m_eq x k
  std::vector<Mat> dA_ub;  // k matrices, each m_ub x n
  std::vector<Mat> dA_eq;  // k matrices, each m_eq x n
};

struct TangentBundle {
  GeneralLP lp;
  TangentSeeds seeds;

  // Throws DimensionMismatch unless every present seed mirrors its primal
  // field and k >= 1.
  void validate() const;
};

struct DifferentiableOutcome {
  SolveOutcome base;
  Mat dx;           // n x k; zeros unless tangents_valid
  Vec dfun;         // k;     zeros unless tangents_valid
  bool tangents_valid = false;
};

// Solves the primal LP while propagating the seeds through the exact pivot
// sequence the primal solver takes (decisions read primal cells only, so the
// path matches linprog bit for bit). At a nondegenerate optimum the result
// is the derivative of (x*, fun) in each seed direction; degenerate optima
// yield the generalized derivative selected by the pivot path.
DifferentiableOutcome solve_with_tangents(const TangentBundle& bundle,
                                          const SimplexConfig& cfg = {});

// Reorders general-form rhs seeds (equalities first, then inequalities) and
// applies canonical row negations. Result is num_rows x k.
Mat canonical_rhs_tangents(const RecoveryMap& map, const Mat& db_ub,
                           const Mat& db_eq);

// Fast path for seeds confined to the rhs: the tangent state is one extra
// column block of shape (m+2) x k instead of k full tableaus. db is in
// canonical row order (see canonical_rhs_tangents) and is not copied per
// call site, so one block can serve many objectives over the same rows.
DifferentiableOutcome solve_canonical_with_rhs_tangents(
    const CanonicalLP& p, const Mat& db, const SimplexConfig& cfg = {});

}  // namespace reachlp
