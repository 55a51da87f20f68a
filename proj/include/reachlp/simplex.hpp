#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "reachlp/lp_core.hpp"

namespace reachlp {

struct Tableau;
struct BasisSet;

struct SimplexConfig {
  double eps_opt = 1e-9;   // reduced-cost screen for entering candidates
  double eps_piv = 1e-9;   // smallest usable pivot magnitude
  double eps_feas = 1e-7;  // phase-one feasibility threshold
  // Pivot budget across both phases; 0 means 50 * (n_c + m).
  std::size_t max_iters = 0;
  bool record_pivots = false;
  // Test hook, called with full state right before each pivot lands.
  std::function<void(const Tableau&, const BasisSet&, std::size_t enter_col,
                     std::size_t exit_row)>
      observer;
};

// Dense simplex tableau, allocated once per solve at the phase-one shape
// (m+2) x (n_c+m+1) and never resized. Phase two masks instead of shrinking:
// auxiliary columns and the bottom row stay in place but are never read.
//
// Layout: [ A | I_aux | b ] over constraint rows, then the objective row
// (rhs holds -z), then the phase-one objective row (rhs holds -w).
struct Tableau {
  std::size_t m = 0;    // constraint rows
  std::size_t n_c = 0;  // structural columns
  int phase = 1;
  std::vector<double> cells;

  std::size_t rows() const { return m + 2; }
  std::size_t cols() const { return n_c + m + 1; }
  std::size_t rhs_col() const { return n_c + m; }
  std::size_t obj_row() const { return m; }
  std::size_t aux_row() const { return m + 1; }

  double* row(std::size_t r) { return cells.data() + r * cols(); }
  const double* row(std::size_t r) const { return cells.data() + r * cols(); }
  double& at(std::size_t r, std::size_t c) { return cells[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return cells[r * cols() + c]; }
};

// indices[r] is the column currently basic in constraint row r.
struct BasisSet {
  std::vector<std::size_t> indices;
};

struct SolveStatus {
  bool feasible = false;
  bool bounded = false;  // stays true (vacuously) when infeasible
  bool success = false;  // feasible && bounded && !hit_iteration_cap
  bool hit_iteration_cap = false;
  std::size_t iterations = 0;  // pivots across both phases
};

struct PivotRecord {
  int phase = 0;
  std::size_t entering_col = 0;
  std::size_t exit_row = 0;
  std::size_t exiting_index = 0;  // basic column that left
  double ratio = 0.0;
  double objective_after = 0.0;  // active phase's objective after the pivot
};

struct SolveOutcome {
  Vec x;             // original variables; zeros unless status.success
  double fun = 0.0;  // c.x at the optimum; 0 unless status.success
  SolveStatus status;
  Tableau tableau;  // final state, still phase-one shaped
  BasisSet basis;
  std::vector<PivotRecord> pivots;  // filled when record_pivots
};

Tableau build_tableau(const CanonicalLP& p);
BasisSet initial_basis(const CanonicalLP& p);

// Bland's rule: smallest column whose cost-row entry is below -eps_opt.
// Phase one scans structural and auxiliary columns against the bottom row;
// phase two scans structural columns only against the objective row.
std::optional<std::size_t> select_entering(const Tableau& t, double eps_opt);

struct RatioChoice {
  std::optional<std::size_t> row;  // empty: no positive pivot entry
  double ratio = 0.0;
};

// Minimum-ratio test over rows with pivot entry > eps_piv. Zero ratios are
// legal (degenerate pivots). Near-ties resolve in favor of rows whose basic
// variable is auxiliary, so marked rows empty out on first touch, then by
// smallest basic index (Bland).
RatioChoice ratio_test(const Tableau& t, const BasisSet& basis,
                       std::size_t enter_col, double eps_piv);

// One Gauss-Jordan step on the full fixed-shape tableau.
// Throws PivotTooSmall when |t[r,c]| <= eps_piv.
void pivot(Tableau& t, BasisSet& basis, std::size_t enter_col,
           std::size_t exit_row, double eps_piv);

// Between phases: every row still owned by an auxiliary variable is replaced
// by its elementwise absolute value. A lingering auxiliary then shows ratio
// ~0 whenever its row has a positive entry in the pivot column, so the ratio
// test ejects it before any real variable moves.
void mark_aux_rows(Tableau& t, const BasisSet& basis);

struct PhaseOneResult {
  Tableau tableau;
  BasisSet basis;
  bool feasible = false;
  bool hit_iteration_cap = false;
  std::size_t iterations = 0;
  std::vector<PivotRecord> pivots;
};

// Runs phase one from scratch. Does not mark auxiliary rows.
PhaseOneResult phase_one(const CanonicalLP& p, const SimplexConfig& cfg = {});

struct PhaseTwoResult {
  bool bounded = false;
  bool hit_iteration_cap = false;
  std::size_t iterations = 0;
  std::vector<PivotRecord> pivots;
};

// Runs phase two on a feasible, already-marked tableau.
PhaseTwoResult phase_two(Tableau& t, BasisSet& basis,
                         const SimplexConfig& cfg = {},
                         std::size_t iterations_used = 0);

// Two-phase solve of a general-form LP.
SolveOutcome linprog(const GeneralLP& lp, const SimplexConfig& cfg = {});

// Independent solves over problems of identical shape. Results are bitwise
// identical to calling linprog sequentially, for any thread count.
std::vector<SolveOutcome> solve_batch(const std::vector<GeneralLP>& problems,
                                      const SimplexConfig& cfg = {},
                                      unsigned threads = 0);

}  // namespace reachlp
