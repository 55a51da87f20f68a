#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "reachlp/errors.hpp"

namespace reachlp {

// Forward-mode scalar carrying k directional derivatives. An empty tangent
// vector means "identically zero", so constants cost no allocation and mix
// freely with seeded values of any width. Comparisons order by value alone;
// min/max selections therefore propagate the tangent of the chosen branch.
class Dual {
 public:
  Dual() = default;
  Dual(double v) : v_(v) {}  // implicit: plain numbers act as constants
  Dual(double v, std::vector<double> d) : v_(v), d_(std::move(d)) {}

  static Dual seeded(double v, std::size_t k, std::size_t index) {
    std::vector<double> d(k, 0.0);
    d[index] = 1.0;
    return {v, std::move(d)};
  }

  double value() const { return v_; }
  const std::vector<double>& tangent() const { return d_; }
  std::size_t width() const { return d_.size(); }
  double deriv(std::size_t i) const { return d_.empty() ? 0.0 : d_[i]; }

 private:
  friend Dual operator+(const Dual& a, const Dual& b);
  friend Dual operator-(const Dual& a, const Dual& b);
  friend Dual operator-(const Dual& a);
  friend Dual operator*(const Dual& a, const Dual& b);
  friend Dual operator/(const Dual& a, const Dual& b);

  double v_ = 0.0;
  std::vector<double> d_;
};

inline double primal(double x) { return x; }
inline double primal(const Dual& x) { return x.value(); }

namespace dual_detail {

inline std::vector<double> scaled(const std::vector<double>& d, double s) {
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = s * d[i];
  return out;
}

// a*da + b*db with empty meaning zero.
inline std::vector<double> lin2(double a, const std::vector<double>& da,
                                double b, const std::vector<double>& db) {
  if (da.empty()) return scaled(db, b);
  if (db.empty()) return scaled(da, a);
  std::vector<double> out(da.size());
  for (std::size_t i = 0; i < da.size(); ++i) out[i] = a * da[i] + b * db[i];
  return out;
}

}  // namespace dual_detail

inline Dual operator+(const Dual& a, const Dual& b) {
  return {a.v_ + b.v_, dual_detail::lin2(1.0, a.d_, 1.0, b.d_)};
}

inline Dual operator-(const Dual& a, const Dual& b) {
  return {a.v_ - b.v_, dual_detail::lin2(1.0, a.d_, -1.0, b.d_)};
}

inline Dual operator-(const Dual& a) {
  return {-a.v_, dual_detail::scaled(a.d_, -1.0)};
}

inline Dual operator*(const Dual& a, const Dual& b) {
  return {a.v_ * b.v_, dual_detail::lin2(b.v_, a.d_, a.v_, b.d_)};
}

inline Dual operator/(const Dual& a, const Dual& b) {
  const double q = a.v_ / b.v_;
  return {q, dual_detail::lin2(1.0 / b.v_, a.d_, -q / b.v_, b.d_)};
}

inline bool operator<(const Dual& a, const Dual& b) { return a.value() < b.value(); }
inline bool operator>(const Dual& a, const Dual& b) { return a.value() > b.value(); }
inline bool operator<=(const Dual& a, const Dual& b) { return a.value() <= b.value(); }
inline bool operator>=(const Dual& a, const Dual& b) { return a.value() >= b.value(); }

inline Dual sin(const Dual& a) {
  return {std::sin(a.value()),
          dual_detail::scaled(a.tangent(), std::cos(a.value()))};
}

inline Dual cos(const Dual& a) {
  return {std::cos(a.value()),
          dual_detail::scaled(a.tangent(), -std::sin(a.value()))};
}

inline Dual tan(const Dual& a) {
  const double t = std::tan(a.value());
  return {t, dual_detail::scaled(a.tangent(), 1.0 + t * t)};
}

inline Dual atan(const Dual& a) {
  const double v = a.value();
  return {std::atan(v), dual_detail::scaled(a.tangent(), 1.0 / (1.0 + v * v))};
}

inline double sqr(double x) { return x * x; }
inline double cube(double x) { return x * x * x; }

inline Dual sqr(const Dual& a) {
  return {a.value() * a.value(),
          dual_detail::scaled(a.tangent(), 2.0 * a.value())};
}

inline Dual cube(const Dual& a) {
  const double v = a.value();
  return {v * v * v, dual_detail::scaled(a.tangent(), 3.0 * v * v)};
}

}  // namespace reachlp
