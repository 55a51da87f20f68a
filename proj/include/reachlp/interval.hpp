#pragma once

// Inclusion arithmetic over an ordered scalar S: plain double for interval
// bounds, Dual for bounds that carry directional derivatives. Branch
// decisions (signs, extremum tests, pole tests) read primal values only, so
// a Dual instantiation follows the exact branch structure of the double one.
//
// Bounds are evaluated in ordinary floating point; no directed rounding is
// applied, so enclosures are exact up to roundoff of the bound expressions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "reachlp/dual.hpp"
#include "reachlp/errors.hpp"
#include "reachlp/linalg.hpp"

namespace reachlp {

template <class S>
struct TInterval {
  S lo{};
  S hi{};

  TInterval() = default;
  TInterval(const S& point) : lo(point), hi(point) {}
  TInterval(S l, S h) : lo(std::move(l)), hi(std::move(h)) {
    if (primal(lo) > primal(hi))
      throw DomainError("interval bounds out of order");
  }
};

using Interval = TInterval<double>;
using DualInterval = TInterval<Dual>;
using IntervalVector = std::vector<Interval>;
template <class S>
using TIntervalVector = std::vector<TInterval<S>>;

template <class S>
TInterval<S> operator+(const TInterval<S>& a, const TInterval<S>& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

template <class S>
TInterval<S> operator-(const TInterval<S>& a, const TInterval<S>& b) {
  return {a.lo - b.hi, a.hi - b.lo};
}

template <class S>
TInterval<S> operator-(const TInterval<S>& a) {
  return {-a.hi, -a.lo};
}

template <class S>
TInterval<S> operator*(const TInterval<S>& a, const TInterval<S>& b) {
  S p1 = a.lo * b.lo;
  S p2 = a.lo * b.hi;
  S p3 = a.hi * b.lo;
  S p4 = a.hi * b.hi;
  using std::max;
  using std::min;
  return {min(min(p1, p2), min(p3, p4)), max(max(p1, p2), max(p3, p4))};
}

template <class S>
TInterval<S> operator/(const TInterval<S>& a, const TInterval<S>& b) {
  if (!(primal(b.lo) > 0.0 || primal(b.hi) < 0.0))
    throw DivisionByZeroInterval("interval division by a set containing zero");
  return a * TInterval<S>(S(1.0) / b.hi, S(1.0) / b.lo);
}

template <class S>
TInterval<S> sqr(const TInterval<S>& a) {
  if (primal(a.lo) >= 0.0) return {sqr(a.lo), sqr(a.hi)};
  if (primal(a.hi) <= 0.0) return {sqr(a.hi), sqr(a.lo)};
  S p1 = sqr(a.lo);
  S p2 = sqr(a.hi);
  using std::max;
  return {S(0.0), max(p1, p2)};  // interior minimum: zero tangent
}

template <class S>
TInterval<S> cube(const TInterval<S>& a) {
  return {cube(a.lo), cube(a.hi)};
}

namespace interval_detail {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kHalfPi = 0.5 * kPi;

// Does base + 2*pi*k land in [lo, hi] for some integer k?
inline bool hits_mod_two_pi(double lo, double hi, double base) {
  const double k = std::ceil((lo - base) / kTwoPi);
  return base + k * kTwoPi <= hi;
}

}  // namespace interval_detail

// Extremum-aware trig bounds: sin/cos are monotone between their critical
// points, so the exact range is spanned by interval endpoints unless a
// critical point falls inside; a clamped extreme has zero tangent.
template <class S>
TInterval<S> sin(const TInterval<S>& a) {
  using std::sin;
  const double lo = primal(a.lo);
  const double hi = primal(a.hi);
  S slo = sin(a.lo);
  S shi = sin(a.hi);
  const bool lo_first = primal(slo) <= primal(shi);
  S out_lo = lo_first ? slo : shi;
  S out_hi = lo_first ? shi : slo;
  if (interval_detail::hits_mod_two_pi(lo, hi, -interval_detail::kHalfPi))
    out_lo = S(-1.0);
  if (interval_detail::hits_mod_two_pi(lo, hi, interval_detail::kHalfPi))
    out_hi = S(1.0);
  return {std::move(out_lo), std::move(out_hi)};
}

template <class S>
TInterval<S> cos(const TInterval<S>& a) {
  using std::cos;
  const double lo = primal(a.lo);
  const double hi = primal(a.hi);
  S clo = cos(a.lo);
  S chi = cos(a.hi);
  const bool lo_first = primal(clo) <= primal(chi);
  S out_lo = lo_first ? clo : chi;
  S out_hi = lo_first ? chi : clo;
  if (interval_detail::hits_mod_two_pi(lo, hi, interval_detail::kPi))
    out_lo = S(-1.0);
  if (interval_detail::hits_mod_two_pi(lo, hi, 0.0)) out_hi = S(1.0);
  return {std::move(out_lo), std::move(out_hi)};
}

template <class S>
TInterval<S> tan(const TInterval<S>& a) {
  using std::tan;
  const double lo = primal(a.lo);
  const double hi = primal(a.hi);
  const double k =
      std::ceil((lo - interval_detail::kHalfPi) / interval_detail::kPi);
  if (interval_detail::kHalfPi + k * interval_detail::kPi <= hi)
    throw DomainError("tan over an interval containing a pole");
  return {tan(a.lo), tan(a.hi)};
}

template <class S>
TInterval<S> atan(const TInterval<S>& a) {
  using std::atan;
  return {atan(a.lo), atan(a.hi)};
}

// Exact range of (M v)_i per row: each x_j contributes once, so picking the
// endpoint by the sign of M(i,j) is tight.
template <class S>
TIntervalVector<S> mat_vec(const Mat& m, const TIntervalVector<S>& v) {
  if (m.cols() != v.size()) throw DimensionMismatch("mat_vec: shape mismatch");
  TIntervalVector<S> out;
  out.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    S lo(0.0);
    S hi(0.0);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double c = m(i, j);
      if (c == 0.0) continue;
      if (c > 0.0) {
        lo = lo + S(c) * v[j].lo;
        hi = hi + S(c) * v[j].hi;
      } else {
        lo = lo + S(c) * v[j].hi;
        hi = hi + S(c) * v[j].lo;
      }
    }
    out.emplace_back(std::move(lo), std::move(hi));
  }
  return out;
}

inline double width(const Interval& a) { return a.hi - a.lo; }
inline double midpoint(const Interval& a) { return 0.5 * (a.lo + a.hi); }

inline bool contains(const Interval& a, double x) {
  return a.lo <= x && x <= a.hi;
}

inline bool contains(const Interval& outer, const Interval& inner) {
  return outer.lo <= inner.lo && inner.hi <= outer.hi;
}

inline IntervalVector make_box(const Vec& lo, const Vec& hi) {
  if (lo.size() != hi.size()) throw DimensionMismatch("box: length mismatch");
  IntervalVector out;
  out.reserve(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) out.emplace_back(lo[i], hi[i]);
  return out;
}

}  // namespace reachlp
