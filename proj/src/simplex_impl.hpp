#pragma once

// Shared two-phase driver. The primal solver and the tangent-propagating
// solver instantiate it with different Ops; pivot decisions read primal
// cells only, so both follow identical pivot paths bit for bit.

#include <cstddef>
#include <vector>

#include "reachlp/kernels.hpp"
#include "reachlp/simplex.hpp"

namespace reachlp::detail {

inline double phase_objective(const Tableau& t) {
  return -t.at(t.phase == 1 ? t.aux_row() : t.obj_row(), t.rhs_col());
}

inline std::size_t default_cap(const Tableau& t, const SimplexConfig& cfg) {
  return cfg.max_iters ? cfg.max_iters : 50 * (t.cols() - 1);
}

struct LoopResult {
  bool ok = true;  // phase one: no anomaly; phase two: bounded
  bool cap_hit = false;
};

template <class Ops>
LoopResult pivot_loop(Tableau& t, BasisSet& basis, Ops&& ops,
                      const SimplexConfig& cfg, std::size_t cap,
                      std::size_t& iters, std::vector<PivotRecord>* log) {
  for (;;) {
    auto col = select_entering(t, cfg.eps_opt);
    if (!col) return {true, false};
    if (iters >= cap) return {true, true};
    auto rc = ratio_test(t, basis, *col, cfg.eps_piv);
    if (!rc.row) return {false, false};
    if (cfg.observer) cfg.observer(t, basis, *col, *rc.row);
    const std::size_t leaving = basis.indices[*rc.row];
    ops.apply_pivot(*rc.row, *col);
    ++iters;
    if (log)
      log->push_back(
          {t.phase, *col, *rc.row, leaving, rc.ratio, phase_objective(t)});
  }
}

template <class Ops>
void mark_loop(Tableau& t, const BasisSet& basis, Ops&& ops) {
  for (std::size_t r = 0; r < t.m; ++r)
    if (basis.indices[r] >= t.n_c) ops.apply_mark(r);
}

struct PrimalOps {
  Tableau& t;
  BasisSet& basis;
  double eps_piv;

  void apply_pivot(std::size_t row, std::size_t col) {
    pivot(t, basis, col, row, eps_piv);
  }
  void apply_mark(std::size_t row) {
    kernels::abs_inplace(t.row(row), t.cols());
  }
};

// Status assembly shared by every front end. Ops must provide apply_pivot
// and apply_mark.
template <class Ops>
SolveStatus drive_two_phase(Tableau& t, BasisSet& basis, Ops&& ops,
                            const SimplexConfig& cfg,
                            std::vector<PivotRecord>* log) {
  SolveStatus st;
  st.bounded = true;
  const std::size_t cap = default_cap(t, cfg);
  std::size_t iters = 0;

  t.phase = 1;
  LoopResult r1 = pivot_loop(t, basis, ops, cfg, cap, iters, log);
  st.feasible = -t.at(t.aux_row(), t.rhs_col()) <= cfg.eps_feas;
  bool cap_hit = r1.cap_hit;
  // The auxiliary objective is bounded below by zero, so r1.ok can be false
  // only under numerical breakdown. Fail closed: report non-success.
  if (!r1.ok) cap_hit = true;

  if (st.feasible && !cap_hit) {
    mark_loop(t, basis, ops);
    t.phase = 2;
    LoopResult r2 = pivot_loop(t, basis, ops, cfg, cap, iters, log);
    st.bounded = r2.ok;
    cap_hit = r2.cap_hit;
  }

  st.iterations = iters;
  st.hit_iteration_cap = cap_hit;
  st.success = st.feasible && st.bounded && !cap_hit;
  return st;
}

// Reads the optimum out of a finished tableau into original variables.
void extract_solution(const CanonicalLP& p, const Tableau& t,
                      const BasisSet& basis, Vec& x_out, double& fun_out);

}  // namespace reachlp::detail
