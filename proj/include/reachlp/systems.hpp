#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>

#include "reachlp/dual.hpp"
#include "reachlp/interval.hpp"

namespace reachlp {

// Kinematic bicycle with reference point between the axles. State is
// (px, py, heading, speed), inputs are (acceleration, steering angle), and
// each state equation takes one additive disturbance:
//   beta = atan(lf/(lf+lr) tan(steer))
//   px'  = v cos(heading + beta) + w0
//   py'  = v sin(heading + beta) + w1
//   h'   = (v/lr) sin(beta)      + w2
//   v'   = accel                 + w3
struct BicycleField {
  double lf = 1.0;
  double lr = 1.0;
  static constexpr std::size_t state_dim = 4;
  static constexpr std::size_t input_dim = 2;
  static constexpr std::size_t dist_dim = 4;

  template <class S>
  void operator()(std::span<const S> x, std::span<const S> u,
                  std::span<const S> w, std::span<S> out) const {
    using std::atan;
    using std::cos;
    using std::sin;
    using std::tan;
    S beta = atan(S(lf / (lf + lr)) * tan(u[1]));
    out[0] = x[3] * cos(x[2] + beta) + w[0];
    out[1] = x[3] * sin(x[2] + beta) + w[1];
    out[2] = x[3] * sin(beta) * S(1.0 / lr) + w[2];
    out[3] = u[0] + w[3];
  }
};

// Van der Pol oscillator:
//   x0' = mu (x0 - x0^3/3 - x1)
//   x1' = x0 / mu
struct VanDerPolField {
  double mu = 1.0;
  static constexpr std::size_t state_dim = 2;
  static constexpr std::size_t input_dim = 0;
  static constexpr std::size_t dist_dim = 0;

  template <class S>
  void operator()(std::span<const S> x, std::span<const S>,
                  std::span<const S>, std::span<S> out) const {
    out[0] = S(mu) * (x[0] - cube(x[0]) / S(3.0) - x[1]);
    out[1] = x[0] / S(mu);
  }
};

// x' = u. Small enough to reason about by hand in tests.
struct SingleIntegratorField {
  static constexpr std::size_t state_dim = 1;
  static constexpr std::size_t input_dim = 1;
  static constexpr std::size_t dist_dim = 0;

  template <class S>
  void operator()(std::span<const S>, std::span<const S> u,
                  std::span<const S>, std::span<S> out) const {
    out[0] = u[0];
  }
};

// Type-erased field exposing the three instantiations the pipeline needs:
// point evaluation, interval inclusion, and interval inclusion with
// directional derivatives.
struct VectorField {
  std::size_t state_dim = 0;
  std::size_t input_dim = 0;
  std::size_t dist_dim = 0;
  std::string name;

  std::function<void(std::span<const double>, std::span<const double>,
                     std::span<const double>, std::span<double>)>
      point;
  std::function<void(std::span<const Interval>, std::span<const Interval>,
                     std::span<const Interval>, std::span<Interval>)>
      box;
  std::function<void(std::span<const DualInterval>,
                     std::span<const DualInterval>,
                     std::span<const DualInterval>, std::span<DualInterval>)>
      dual_box;
};

template <class F>
VectorField make_field(F f, std::string name) {
  VectorField vf;
  vf.state_dim = F::state_dim;
  vf.input_dim = F::input_dim;
  vf.dist_dim = F::dist_dim;
  vf.name = std::move(name);
  vf.point = [f](std::span<const double> x, std::span<const double> u,
                 std::span<const double> w, std::span<double> out) {
    f(x, u, w, out);
  };
  vf.box = [f](std::span<const Interval> x, std::span<const Interval> u,
               std::span<const Interval> w, std::span<Interval> out) {
    f(x, u, w, out);
  };
  vf.dual_box = [f](std::span<const DualInterval> x,
                    std::span<const DualInterval> u,
                    std::span<const DualInterval> w,
                    std::span<DualInterval> out) { f(x, u, w, out); };
  return vf;
}

VectorField bicycle_field(double lf = 1.0, double lr = 1.0);
VectorField vanderpol_field(double mu = 1.0);
VectorField single_integrator_field();

// Interval image of the field over a state box with point inputs.
IntervalVector inclusion(const VectorField& f, const IntervalVector& x,
                         const Vec& u, const IntervalVector& w);

}  // namespace reachlp
