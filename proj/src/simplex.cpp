#include "reachlp/simplex.hpp"

#include <cmath>
#include <string>

#include "reachlp/errors.hpp"
#include "reachlp/kernels.hpp"
#include "reachlp/parallel.hpp"
#include "simplex_impl.hpp"

namespace reachlp {

Tableau build_tableau(const CanonicalLP& p) {
  const std::size_t m = p.num_rows();
  const std::size_t n_c = p.num_cols();
  Tableau t;
  t.m = m;
  t.n_c = n_c;
  t.phase = 1;
  t.cells.assign(t.rows() * t.cols(), 0.0);

  for (std::size_t r = 0; r < m; ++r) {
    double* row = t.row(r);
    for (std::size_t j = 0; j < n_c; ++j) row[j] = p.A(r, j);
    row[n_c + r] = 1.0;
    row[t.rhs_col()] = p.b[r];
  }
  double* obj = t.row(t.obj_row());
  for (std::size_t j = 0; j < n_c; ++j) obj[j] = p.c[j];

  // Phase-one costs reduced against the all-auxiliary basis:
  // w = sum(b) - sum_r A[r,:] x, stored as [-colsum(A) | 0 | -sum(b)].
  double* aux = t.row(t.aux_row());
  for (std::size_t j = 0; j < n_c; ++j) {
    double s = 0.0;
    for (std::size_t r = 0; r < m; ++r) s += p.A(r, j);
    aux[j] = -s;
  }
  double bsum = 0.0;
  for (std::size_t r = 0; r < m; ++r) bsum += p.b[r];
  aux[t.rhs_col()] = -bsum;
  return t;
}

BasisSet initial_basis(const CanonicalLP& p) {
  BasisSet b;
  b.indices.resize(p.num_rows());
  for (std::size_t r = 0; r < p.num_rows(); ++r)
    b.indices[r] = p.num_cols() + r;
  return b;
}

std::optional<std::size_t> select_entering(const Tableau& t, double eps_opt) {
  const std::size_t limit = t.phase == 1 ? t.rhs_col() : t.n_c;
  const double* costs = t.row(t.phase == 1 ? t.aux_row() : t.obj_row());
  std::size_t j = kernels::find_below(costs, limit, -eps_opt);
  if (j == kernels::npos) return std::nullopt;
  return j;
}

RatioChoice ratio_test(const Tableau& t, const BasisSet& basis,
                       std::size_t enter_col, double eps_piv) {
  const std::size_t rhs = t.rhs_col();
  double best = 0.0;
  bool have = false;
  for (std::size_t r = 0; r < t.m; ++r) {
    const double piv = t.at(r, enter_col);
    if (piv > eps_piv) {
      const double ratio = t.at(r, rhs) / piv;
      if (!have || ratio < best) {
        best = ratio;
        have = true;
      }
    }
  }
  if (!have) return {};

  // Rows within a hair of the minimum count as tied; floating-point noise in
  // degenerate rhs entries must not defeat the tie-breaking order below.
  const double tie = best + 1e-10 * (1.0 + std::fabs(best));
  const bool prefer_aux = t.phase == 2;
  std::size_t best_row = kernels::npos;
  bool best_aux = false;
  for (std::size_t r = 0; r < t.m; ++r) {
    const double piv = t.at(r, enter_col);
    if (piv <= eps_piv) continue;
    if (t.at(r, rhs) / piv > tie) continue;
    const bool is_aux = basis.indices[r] >= t.n_c;
    if (best_row == kernels::npos) {
      best_row = r;
      best_aux = is_aux;
      continue;
    }
    if (prefer_aux && is_aux != best_aux) {
      if (is_aux) {
        best_row = r;
        best_aux = true;
      }
      continue;
    }
    if (basis.indices[r] < basis.indices[best_row]) {
      best_row = r;
      best_aux = is_aux;
    }
  }
  return {best_row, t.at(best_row, rhs) / t.at(best_row, enter_col)};
}

void pivot(Tableau& t, BasisSet& basis, std::size_t enter_col,
           std::size_t exit_row, double eps_piv) {
  const double piv = t.at(exit_row, enter_col);
  if (std::fabs(piv) <= eps_piv)
    throw PivotTooSmall("pivot entry " + std::to_string(piv) + " at row " +
                        std::to_string(exit_row) + ", col " +
                        std::to_string(enter_col));
  const std::size_t w = t.cols();
  kernels::scale_div(t.row(exit_row), piv, w);
  for (std::size_t r = 0; r < t.rows(); ++r) {
    if (r == exit_row) continue;
    const double f = t.at(r, enter_col);
    if (f != 0.0) kernels::axpy(t.row(r), t.row(exit_row), -f, w);
  }
  basis.indices[exit_row] = enter_col;
}

void mark_aux_rows(Tableau& t, const BasisSet& basis) {
  for (std::size_t r = 0; r < t.m; ++r)
    if (basis.indices[r] >= t.n_c) kernels::abs_inplace(t.row(r), t.cols());
}

namespace detail {

void extract_solution(const CanonicalLP& p, const Tableau& t,
                      const BasisSet& basis, Vec& x_out, double& fun_out) {
  Vec x_c(p.num_cols(), 0.0);
  for (std::size_t r = 0; r < t.m; ++r)
    if (basis.indices[r] < t.n_c) x_c[basis.indices[r]] = t.at(r, t.rhs_col());
  x_out = recover(p.recovery, x_c);
  fun_out = -t.at(t.obj_row(), t.rhs_col());
}

}  // namespace detail

PhaseOneResult phase_one(const CanonicalLP& p, const SimplexConfig& cfg) {
  PhaseOneResult res;
  res.tableau = build_tableau(p);
  res.basis = initial_basis(p);
  detail::PrimalOps ops{res.tableau, res.basis, cfg.eps_piv};
  const std::size_t cap = detail::default_cap(res.tableau, cfg);
  std::vector<PivotRecord>* log = cfg.record_pivots ? &res.pivots : nullptr;
  res.tableau.phase = 1;
  auto r = detail::pivot_loop(res.tableau, res.basis, ops, cfg, cap,
                              res.iterations, log);
  res.hit_iteration_cap = r.cap_hit;
  res.feasible =
      -res.tableau.at(res.tableau.aux_row(), res.tableau.rhs_col()) <=
      cfg.eps_feas;
  return res;
}

PhaseTwoResult phase_two(Tableau& t, BasisSet& basis, const SimplexConfig& cfg,
                         std::size_t iterations_used) {
  PhaseTwoResult res;
  detail::PrimalOps ops{t, basis, cfg.eps_piv};
  const std::size_t cap = detail::default_cap(t, cfg);
  std::vector<PivotRecord>* log = cfg.record_pivots ? &res.pivots : nullptr;
  t.phase = 2;
  std::size_t iters = iterations_used;
  auto r = detail::pivot_loop(t, basis, ops, cfg, cap, iters, log);
  res.bounded = r.ok;
  res.hit_iteration_cap = r.cap_hit;
  res.iterations = iters;
  return res;
}

SolveOutcome linprog(const GeneralLP& lp, const SimplexConfig& cfg) {
  const CanonicalLP p = canonicalize(lp);
  SolveOutcome out;
  out.tableau = build_tableau(p);
  out.basis = initial_basis(p);
  detail::PrimalOps ops{out.tableau, out.basis, cfg.eps_piv};
  std::vector<PivotRecord>* log = cfg.record_pivots ? &out.pivots : nullptr;
  out.status = detail::drive_two_phase(out.tableau, out.basis, ops, cfg, log);
  out.x.assign(lp.num_vars(), 0.0);
  out.fun = 0.0;
  if (out.status.success)
    detail::extract_solution(p, out.tableau, out.basis, out.x, out.fun);
  return out;
}

std::vector<SolveOutcome> solve_batch(const std::vector<GeneralLP>& problems,
                                      const SimplexConfig& cfg,
                                      unsigned threads) {
  if (!problems.empty()) {
    const GeneralLP& first = problems.front();
    for (const GeneralLP& lp : problems) {
      if (lp.num_vars() != first.num_vars() || lp.num_ub() != first.num_ub() ||
          lp.num_eq() != first.num_eq() || lp.unbounded != first.unbounded)
        throw DimensionMismatch("solve_batch: problems must share one shape");
    }
  }
  std::vector<SolveOutcome> out(problems.size());
  parallel_for(problems.size(), threads,
               [&](std::size_t i, unsigned) { out[i] = linprog(problems[i], cfg); });
  return out;
}

}  // namespace reachlp
