#include "reachlp/autodiff.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "reachlp/errors.hpp"
#include "reachlp/kernels.hpp"
#include "simplex_impl.hpp"

namespace reachlp {

namespace {

bool all_zero(const Mat& m) {
  const double* p = m.data();
  for (std::size_t i = 0, n = m.rows() * m.cols(); i < n; ++i)
    if (p[i] != 0.0) return false;
  return true;
}

bool all_zero(const std::vector<Mat>& ms) {
  for (const Mat& m : ms)
    if (!all_zero(m)) return false;
  return true;
}

void check_mat(const Mat& m, std::size_t rows, std::size_t cols,
               const char* name) {
  if (m.empty() && m.rows() == 0) return;  // zero shorthand
  if (m.rows() != rows || m.cols() != cols)
    throw DimensionMismatch(std::string("seeds: ") + name + " is " +
                            std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", expected " +
                            std::to_string(rows) + "x" + std::to_string(cols));
}

// Tangent state confined to the rhs column: one (m+2) x k block. Valid
// whenever A and c carry zero seeds; row operations then never mix primal
// cells into non-rhs tangent columns, which therefore stay exactly zero.
struct RhsTangentOps {
  Tableau& t;
  BasisSet& basis;
  double eps_piv;
  Mat& dtan;  // (m+2) x k

  void apply_pivot(std::size_t row, std::size_t col) {
    const double piv = t.at(row, col);
    if (std::fabs(piv) <= eps_piv)
      throw PivotTooSmall("pivot entry " + std::to_string(piv));
    const std::size_t w = t.cols();
    const std::size_t k = dtan.cols();
    kernels::scale_div(t.row(row), piv, w);
    kernels::scale_div(dtan.row(row), piv, k);
    for (std::size_t r = 0; r < t.rows(); ++r) {
      if (r == row) continue;
      const double f = t.at(r, col);
      if (f != 0.0) {
        kernels::axpy(dtan.row(r), dtan.row(row), -f, k);
        kernels::axpy(t.row(r), t.row(row), -f, w);
      }
    }
    basis.indices[row] = col;
  }

  void apply_mark(std::size_t row) {
    if (t.at(row, t.rhs_col()) < 0.0)
      kernels::scale_div(dtan.row(row), -1.0, dtan.cols());
    kernels::abs_inplace(t.row(row), t.cols());
  }
};

// Full tangent state: k shadow tableaus sharing the primal layout.
struct GeneralTangentOps {
  Tableau& t;
  BasisSet& basis;
  double eps_piv;
  std::vector<double>& tan;  // k blocks of rows()*cols()
  std::size_t k;
  Vec dpiv;  // scratch

  double* block(std::size_t d) { return tan.data() + d * t.rows() * t.cols(); }

  void apply_pivot(std::size_t row, std::size_t col) {
    const double piv = t.at(row, col);
    if (std::fabs(piv) <= eps_piv)
      throw PivotTooSmall("pivot entry " + std::to_string(piv));
    const std::size_t w = t.cols();
    dpiv.resize(k);
    for (std::size_t d = 0; d < k; ++d) dpiv[d] = block(d)[row * w + col];
    kernels::scale_div(t.row(row), piv, w);
    // d(r/piv) = (dr - (r/piv) dpiv) / piv, using the already-scaled row.
    for (std::size_t d = 0; d < k; ++d) {
      double* tr = block(d) + row * w;
      if (dpiv[d] != 0.0) kernels::axpy(tr, t.row(row), -dpiv[d], w);
      kernels::scale_div(tr, piv, w);
    }
    for (std::size_t r = 0; r < t.rows(); ++r) {
      if (r == row) continue;
      const double f = t.at(r, col);
      for (std::size_t d = 0; d < k; ++d) {
        double* ti = block(d) + r * w;
        const double df = ti[col];  // read before the update clobbers it
        if (df != 0.0) kernels::axpy(ti, t.row(row), -df, w);
        if (f != 0.0) kernels::axpy(ti, block(d) + row * w, -f, w);
      }
      if (f != 0.0) kernels::axpy(t.row(r), t.row(row), -f, w);
    }
    basis.indices[row] = col;
  }

  void apply_mark(std::size_t row) {
    const std::size_t w = t.cols();
    for (std::size_t d = 0; d < k; ++d) {
      double* tr = block(d) + row * w;
      for (std::size_t c = 0; c < w; ++c)
        if (t.at(row, c) < 0.0) tr[c] = -tr[c];
    }
    kernels::abs_inplace(t.row(row), w);
  }
};

Mat seed_or_zero(const Mat& m, std::size_t rows, std::size_t k) {
  if (m.rows() == rows && m.cols() == k) return m;
  return Mat(rows, k);
}

}  // namespace

void TangentBundle::validate() const {
  lp.validate();
  if (seeds.k == 0) throw DimensionMismatch("seeds: k must be at least 1");
  const std::size_t n = lp.num_vars();
  const std::size_t m_ub = lp.num_ub();
  const std::size_t m_eq = lp.num_eq();
  check_mat(seeds.dc, n, seeds.k, "dc");
  if (m_ub > 0) check_mat(seeds.db_ub, m_ub, seeds.k, "db_ub");
  if (m_eq > 0) check_mat(seeds.db_eq, m_eq, seeds.k, "db_eq");
  if (!seeds.dA_ub.empty()) {
    if (seeds.dA_ub.size() != seeds.k)
      throw DimensionMismatch("seeds: dA_ub must hold k matrices");
    for (const Mat& m : seeds.dA_ub) check_mat(m, m_ub, n, "dA_ub[d]");
  }
  if (!seeds.dA_eq.empty()) {
    if (seeds.dA_eq.size() != seeds.k)
      throw DimensionMismatch("seeds: dA_eq must hold k matrices");
    for (const Mat& m : seeds.dA_eq) check_mat(m, m_eq, n, "dA_eq[d]");
  }
}

Mat canonical_rhs_tangents(const RecoveryMap& map, const Mat& db_ub,
                           const Mat& db_eq) {
  const std::size_t k = !db_eq.empty() ? db_eq.cols() : db_ub.cols();
  Mat db(map.num_rows(), k);
  for (std::size_t d = 0; d < k; ++d) {
    for (std::size_t r = 0; r < map.m_eq; ++r)
      db(r, d) = db_eq.empty() ? 0.0 : db_eq(r, d);
    for (std::size_t r = 0; r < map.m_ub; ++r)
      db(map.m_eq + r, d) = db_ub.empty() ? 0.0 : db_ub(r, d);
  }
  for (std::size_t r = 0; r < map.num_rows(); ++r)
    if (map.row_negated[r])
      for (std::size_t d = 0; d < k; ++d) db(r, d) = -db(r, d);
  return db;
}

namespace {

DifferentiableOutcome finalize_rhs(const CanonicalLP& p, Tableau&& t,
                                   BasisSet&& basis, const Mat& dtan,
                                   SolveStatus st,
                                   std::vector<PivotRecord>&& log) {
  const std::size_t k = dtan.cols();
  const std::size_t n = p.recovery.n;
  DifferentiableOutcome out;
  out.base.status = st;
  out.base.x.assign(n, 0.0);
  out.dx = Mat(n, k);
  out.dfun.assign(k, 0.0);
  if (st.success) {
    detail::extract_solution(p, t, basis, out.base.x, out.base.fun);
    Vec dx_c(p.num_cols(), 0.0);
    for (std::size_t d = 0; d < k; ++d) {
      std::fill(dx_c.begin(), dx_c.end(), 0.0);
      for (std::size_t r = 0; r < t.m; ++r)
        if (basis.indices[r] < t.n_c) dx_c[basis.indices[r]] = dtan(r, d);
      Vec dx = recover(p.recovery, dx_c);
      for (std::size_t j = 0; j < n; ++j) out.dx(j, d) = dx[j];
      out.dfun[d] = -dtan(t.obj_row(), d);
    }
    out.tangents_valid = true;
  }
  out.base.tableau = std::move(t);
  out.base.basis = std::move(basis);
  out.base.pivots = std::move(log);
  return out;
}

}  // namespace

DifferentiableOutcome solve_canonical_with_rhs_tangents(
    const CanonicalLP& p, const Mat& db, const SimplexConfig& cfg) {
  if (db.rows() != p.num_rows() || db.cols() == 0)
    throw DimensionMismatch("rhs tangents must be num_rows x k with k >= 1");
  const std::size_t k = db.cols();
  Tableau t = build_tableau(p);
  BasisSet basis = initial_basis(p);
  Mat dtan(t.rows(), k);
  for (std::size_t r = 0; r < t.m; ++r)
    for (std::size_t d = 0; d < k; ++d) dtan(r, d) = db(r, d);
  for (std::size_t d = 0; d < k; ++d) {
    double s = 0.0;
    for (std::size_t r = 0; r < t.m; ++r) s += db(r, d);
    dtan(t.aux_row(), d) = -s;
  }
  RhsTangentOps ops{t, basis, cfg.eps_piv, dtan};
  std::vector<PivotRecord> log;
  SolveStatus st = detail::drive_two_phase(
      t, basis, ops, cfg, cfg.record_pivots ? &log : nullptr);
  return finalize_rhs(p, std::move(t), std::move(basis), dtan, st,
                      std::move(log));
}

DifferentiableOutcome solve_with_tangents(const TangentBundle& bundle,
                                          const SimplexConfig& cfg) {
  bundle.validate();
  const TangentSeeds& s = bundle.seeds;
  const std::size_t k = s.k;
  const CanonicalLP p = canonicalize(bundle.lp);
  const std::size_t m = p.num_rows();

  const bool rhs_only = all_zero(s.dc) && all_zero(s.dA_ub) && all_zero(s.dA_eq);
  Mat db = canonical_rhs_tangents(
      p.recovery, seed_or_zero(s.db_ub, bundle.lp.num_ub(), k),
      seed_or_zero(s.db_eq, bundle.lp.num_eq(), k));
  if (rhs_only) return solve_canonical_with_rhs_tangents(p, db, cfg);

  // General path: one shadow tableau per direction.
  const std::size_t n = bundle.lp.num_vars();
  const std::size_t n_c = p.num_cols();
  const bool free_mode = p.recovery.mode == VarMode::Free;
  Tableau t = build_tableau(p);
  BasisSet basis = initial_basis(p);
  const std::size_t w = t.cols();
  std::vector<double> tan(k * t.rows() * w, 0.0);

  for (std::size_t d = 0; d < k; ++d) {
    double* blk = tan.data() + d * t.rows() * w;
    // dA in canonical layout, honoring free-variable splits and the row
    // negations recorded during canonicalization.
    for (std::size_t r = 0; r < m; ++r) {
      const bool is_eq = r < p.recovery.m_eq;
      const std::size_t src_row = is_eq ? r : r - p.recovery.m_eq;
      const std::vector<Mat>& dA = is_eq ? s.dA_eq : s.dA_ub;
      const double sign = p.recovery.row_negated[r] ? -1.0 : 1.0;
      if (!dA.empty()) {
        for (std::size_t j = 0; j < n; ++j) {
          const double v = sign * dA[d](src_row, j);
          blk[r * w + j] = v;
          if (free_mode) blk[r * w + n + j] = -v;
        }
      }
      blk[r * w + t.rhs_col()] = db(r, d);
    }
    if (!s.dc.empty()) {
      for (std::size_t j = 0; j < n; ++j) {
        blk[t.obj_row() * w + j] = s.dc(j, d);
        if (free_mode) blk[t.obj_row() * w + n + j] = -s.dc(j, d);
      }
    }
    for (std::size_t j = 0; j < n_c; ++j) {
      double col_sum = 0.0;
      for (std::size_t r = 0; r < m; ++r) col_sum += blk[r * w + j];
      blk[t.aux_row() * w + j] = -col_sum;
    }
    double b_sum = 0.0;
    for (std::size_t r = 0; r < m; ++r) b_sum += db(r, d);
    blk[t.aux_row() * w + t.rhs_col()] = -b_sum;
  }

  GeneralTangentOps ops{t, basis, cfg.eps_piv, tan, k, {}};
  std::vector<PivotRecord> log;
  SolveStatus st = detail::drive_two_phase(
      t, basis, ops, cfg, cfg.record_pivots ? &log : nullptr);

  DifferentiableOutcome out;
  out.base.status = st;
  out.base.x.assign(n, 0.0);
  out.dx = Mat(n, k);
  out.dfun.assign(k, 0.0);
  if (st.success) {
    detail::extract_solution(p, t, basis, out.base.x, out.base.fun);
    Vec dx_c(n_c, 0.0);
    for (std::size_t d = 0; d < k; ++d) {
      const double* blk = tan.data() + d * t.rows() * w;
      std::fill(dx_c.begin(), dx_c.end(), 0.0);
      for (std::size_t r = 0; r < t.m; ++r)
        if (basis.indices[r] < n_c)
          dx_c[basis.indices[r]] = blk[r * w + t.rhs_col()];
      Vec dx = recover(p.recovery, dx_c);
      for (std::size_t j = 0; j < n; ++j) out.dx(j, d) = dx[j];
      out.dfun[d] = -blk[t.obj_row() * w + t.rhs_col()];
    }
    out.tangents_valid = true;
  }
  out.base.tableau = std::move(t);
  out.base.basis = std::move(basis);
  out.base.pivots = std::move(log);
  return out;
}

}  // namespace reachlp
