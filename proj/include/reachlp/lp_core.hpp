#pragma once

#include <cstddef>
#include <vector>

#include "reachlp/linalg.hpp"

namespace reachlp {

// min c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,
// with x >= 0 by default or x free when unbounded is set.
// Empty A_ub / A_eq blocks mean "no constraints of that kind".
struct GeneralLP {
  Vec c;
  Mat A_ub;
  Vec b_ub;
  Mat A_eq;
  Vec b_eq;
  bool unbounded = false;

  std::size_t num_vars() const { return c.size(); }
  std::size_t num_ub() const { return b_ub.size(); }
  std::size_t num_eq() const { return b_eq.size(); }

  // Throws DimensionMismatch on inconsistent shapes.
  void validate() const;
};

enum class VarMode { NonNegative, Free };

// Everything needed to map a canonical-form point back to original
// variables. The map is linear, so it applies to tangents unchanged.
struct RecoveryMap {
  VarMode mode = VarMode::NonNegative;
  std::size_t n = 0;     // original variable count
  std::size_t m_eq = 0;  // equality rows (placed first)
  std::size_t m_ub = 0;  // inequality rows (placed after, one slack each)
  std::vector<bool> row_negated;  // rows flipped to make b nonnegative

  std::size_t num_rows() const { return m_eq + m_ub; }
  std::size_t num_cols() const {
    return (mode == VarMode::Free ? 2 * n : n) + m_ub;
  }
  // Column of the slack owned by inequality row i (0-based among
  // inequalities). Its recorded coefficient is +1 before row negation.
  std::size_t slack_col(std::size_t i) const {
    return (mode == VarMode::Free ? 2 * n : n) + i;
  }
};

// min c.x  s.t.  A x = b,  x >= 0,  b >= 0 componentwise.
struct CanonicalLP {
  Mat A;
  Vec b;
  Vec c;
  RecoveryMap recovery;

  std::size_t num_rows() const { return b.size(); }
  std::size_t num_cols() const { return c.size(); }
};

// Rewrites a general LP in canonical form: equalities first, one slack per
// inequality, free variables split x = xp - xn with column layout
// [xp | xn | slacks], rows with negative b negated after slack insertion.
CanonicalLP canonicalize(const GeneralLP& lp);

// Maps a canonical-form point (or tangent) back to original variables.
Vec recover(const RecoveryMap& map, const Vec& x_c);

}  // namespace reachlp
