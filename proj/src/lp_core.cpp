#include "reachlp/lp_core.hpp"

#include <string>

#include "reachlp/errors.hpp"

namespace reachlp {

void GeneralLP::validate() const {
  const std::size_t n = c.size();
  if (n == 0) throw DimensionMismatch("lp: objective is empty");
  if (A_ub.rows() != b_ub.size())
    throw DimensionMismatch("lp: A_ub has " + std::to_string(A_ub.rows()) +
                            " rows but b_ub has " + std::to_string(b_ub.size()));
  if (A_ub.rows() > 0 && A_ub.cols() != n)
    throw DimensionMismatch("lp: A_ub has " + std::to_string(A_ub.cols()) +
                            " cols for " + std::to_string(n) + " variables");
  if (A_eq.rows() != b_eq.size())
    throw DimensionMismatch("lp: A_eq has " + std::to_string(A_eq.rows()) +
                            " rows but b_eq has " + std::to_string(b_eq.size()));
  if (A_eq.rows() > 0 && A_eq.cols() != n)
    throw DimensionMismatch("lp: A_eq has " + std::to_string(A_eq.cols()) +
                            " cols for " + std::to_string(n) + " variables");
}

CanonicalLP canonicalize(const GeneralLP& lp) {
  lp.validate();
  const std::size_t n = lp.num_vars();
  const std::size_t m_eq = lp.num_eq();
  const std::size_t m_ub = lp.num_ub();
  const std::size_t m = m_eq + m_ub;
  const bool free_mode = lp.unbounded;

  CanonicalLP out;
  out.recovery.mode = free_mode ? VarMode::Free : VarMode::NonNegative;
  out.recovery.n = n;
  out.recovery.m_eq = m_eq;
  out.recovery.m_ub = m_ub;
  out.recovery.row_negated.assign(m, false);

  const std::size_t n_c = out.recovery.num_cols();
  out.A = Mat(m, n_c);
  out.b = Vec(m, 0.0);
  out.c = Vec(n_c, 0.0);

  for (std::size_t j = 0; j < n; ++j) {
    out.c[j] = lp.c[j];
    if (free_mode) out.c[n + j] = -lp.c[j];
  }

  for (std::size_t i = 0; i < m_eq; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out.A(i, j) = lp.A_eq(i, j);
      if (free_mode) out.A(i, n + j) = -lp.A_eq(i, j);
    }
    out.b[i] = lp.b_eq[i];
  }
  for (std::size_t i = 0; i < m_ub; ++i) {
    const std::size_t r = m_eq + i;
    for (std::size_t j = 0; j < n; ++j) {
      out.A(r, j) = lp.A_ub(i, j);
      if (free_mode) out.A(r, n + j) = -lp.A_ub(i, j);
    }
    out.A(r, out.recovery.slack_col(i)) = 1.0;
    out.b[r] = lp.b_ub[i];
  }

  // Negation happens after slack insertion, so a flipped inequality row
  // carries its slack with coefficient -1.
  for (std::size_t r = 0; r < m; ++r) {
    if (out.b[r] < 0.0) {
      for (std::size_t j = 0; j < n_c; ++j) out.A(r, j) = -out.A(r, j);
      out.b[r] = -out.b[r];
      out.recovery.row_negated[r] = true;
    }
  }
  return out;
}

Vec recover(const RecoveryMap& map, const Vec& x_c) {
  if (x_c.size() != map.num_cols())
    throw DimensionMismatch("recover: point has " + std::to_string(x_c.size()) +
                            " entries, expected " + std::to_string(map.num_cols()));
  Vec x(map.n, 0.0);
  for (std::size_t j = 0; j < map.n; ++j) {
    x[j] = map.mode == VarMode::Free ? x_c[j] - x_c[map.n + j] : x_c[j];
  }
  return x;
}

}  // namespace reachlp
