#include <cmath>
#include <cstddef>
#include <numbers>
#include <type_traits>
#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "reachlp/errors.hpp"
#include "reachlp/reach.hpp"
#include "reachlp/scenarios.hpp"

using reachlp::Dual;
using reachlp::DualInterval;
using reachlp::EmbeddingState;
using reachlp::EmbeddingTrajectory;
using reachlp::Interval;
using reachlp::IntervalVector;
using reachlp::LiftedSystem;
using reachlp::Mat;
using reachlp::NudgeConfig;
using reachlp::ObstacleSpec;
using reachlp::ReachOptions;
using reachlp::Vec;

namespace {

struct NegateField {
  static constexpr std::size_t state_dim = 1;
  static constexpr std::size_t input_dim = 0;
  static constexpr std::size_t dist_dim = 0;
  template <class S>
  void operator()(std::span<const S> x, std::span<const S>,
                  std::span<const S>, std::span<S> out) const {
    out[0] = -x[0];
  }
};

struct SteepField {
  static constexpr std::size_t state_dim = 1;
  static constexpr std::size_t input_dim = 0;
  static constexpr std::size_t dist_dim = 0;
  template <class S>
  void operator()(std::span<const S> x, std::span<const S>,
                  std::span<const S>, std::span<S> out) const {
    out[0] = S(-10.0) * x[0];
  }
};

struct ZeroField {
  static constexpr std::size_t state_dim = 1;
  static constexpr std::size_t input_dim = 0;
  static constexpr std::size_t dist_dim = 0;
  template <class S>
  void operator()(std::span<const S>, std::span<const S>, std::span<const S>,
                  std::span<S> out) const {
    out[0] = S(0.0);
  }
};

// Constant growth band: the box derivative is [0, 1] regardless of state.
struct BandField {
  static constexpr std::size_t state_dim = 1;
  static constexpr std::size_t input_dim = 0;
  static constexpr std::size_t dist_dim = 0;
  template <class S>
  void operator()(std::span<const S>, std::span<const S>, std::span<const S>,
                  std::span<S> out) const {
    if constexpr (std::is_same_v<S, Interval>)
      out[0] = Interval(0.0, 1.0);
    else if constexpr (std::is_same_v<S, DualInterval>)
      out[0] = DualInterval(Dual(0.0), Dual(1.0));
    else
      out[0] = S(0.5);
  }
};

template <class F>
LiftedSystem one_dim_system(F f, const char* name, double x0_lo,
                            double x0_hi) {
  LiftedSystem sys;
  sys.H = Mat::identity(1);
  sys.H_plus = Mat::identity(1);
  sys.field = reachlp::make_field(f, name);
  sys.x0_box = reachlp::make_box({x0_lo}, {x0_hi});
  return sys;
}

LiftedSystem toy_integrator(double x0_lo, double x0_hi) {
  LiftedSystem sys;
  sys.H = Mat::identity(1);
  sys.H_plus = Mat::identity(1);
  sys.field = reachlp::single_integrator_field();
  sys.x0_box = reachlp::make_box({x0_lo}, {x0_hi});
  return sys;
}

}  // namespace

TEST_CASE("refine over an identity lifting returns the box unchanged") {
  const Vec y_lo = {0.9, -0.1};
  const Vec y_hi = {1.1, 0.1};
  auto r = reachlp::refine(y_lo, y_hi, Mat::identity(2));
  CHECK(r.z_lo == y_lo);
  CHECK(r.z_hi == y_hi);
  CHECK_FALSE(r.any_fallback());
}

TEST_CASE("redundant rows tighten each other") {
  Mat H(2, 1);
  H(0, 0) = 1.0;
  H(1, 0) = 1.0;
  auto r = reachlp::refine({0.0, 0.5}, {1.0, 2.0}, H);
  REQUIRE(r.z_lo.size() == 2);
  CHECK(r.z_lo[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.z_hi[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.z_lo[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.z_hi[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_FALSE(r.any_fallback());
  // Never looser than the input.
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(r.z_lo[j] >= (j == 0 ? 0.0 : 0.5));
    CHECK(r.z_hi[j] <= (j == 0 ? 1.0 : 2.0));
  }
}

TEST_CASE("an empty pullback keeps the input bounds and flags them") {
  Mat H(2, 1);
  H(0, 0) = 1.0;
  H(1, 0) = 1.0;
  const Vec y_lo = {0.0, 5.0};
  const Vec y_hi = {1.0, 6.0};  // rows demand x in [0,1] and in [5,6]
  auto r = reachlp::refine(y_lo, y_hi, H);
  CHECK(r.z_lo == y_lo);
  CHECK(r.z_hi == y_hi);
  CHECK(r.any_fallback());
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(r.fallback_lo[j]);
    CHECK(r.fallback_hi[j]);
  }
}

TEST_CASE("refinement of a lifted sample cloud stays a sandwich") {
  const LiftedSystem bike = reachlp::bicycle_scenario();
  const Mat& H = bike.H;
  const IntervalVector xbox =
      reachlp::make_box({7.9, 6.9, -0.7, 1.9}, {8.1, 7.1, -0.6, 2.1});

  // Hull of H * xbox, inflated on the coupled rows so there is slack to cut.
  const IntervalVector hull = reachlp::mat_vec(H, xbox);
  Vec y_lo(hull.size()), y_hi(hull.size());
  for (std::size_t j = 0; j < hull.size(); ++j) {
    const double pad = j < 4 ? 0.0 : 0.5;
    y_lo[j] = hull[j].lo - pad;
    y_hi[j] = hull[j].hi + pad;
  }
  auto r = reachlp::refine(y_lo, y_hi, H);
  CHECK_FALSE(r.any_fallback());
  for (std::size_t j = 0; j < hull.size(); ++j) {
    CHECK(r.z_lo[j] >= y_lo[j] - 1e-9);
    CHECK(r.z_hi[j] <= y_hi[j] + 1e-9);
    CHECK(r.z_lo[j] <= r.z_hi[j]);
  }

  // No point of the original cloud may be cut off.
  oracle::Rng rng(424);
  for (int it = 0; it < 1000; ++it) {
    Vec x(4);
    for (int c = 0; c < 4; ++c)
      x[c] = xbox[c].lo + rng.unit() * (xbox[c].hi - xbox[c].lo);
    for (std::size_t j = 0; j < H.rows(); ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < H.cols(); ++c) acc += H(j, c) * x[c];
      CHECK(acc >= r.z_lo[j] - 1e-7);
      CHECK(acc <= r.z_hi[j] + 1e-7);
    }
  }
}

TEST_CASE("embedding dynamics of pure decay swaps the face derivatives") {
  LiftedSystem sys = one_dim_system(NegateField{}, "decay", -1.0, 1.0);
  EmbeddingState s;
  s.y_lo = {-1.0};
  s.y_hi = {1.0};
  for (bool refine : {false, true}) {
    ReachOptions opt;
    opt.refine = refine;
    const EmbeddingState d = reachlp::embedding_dynamics(s, 0, sys, opt);
    CHECK(d.y_lo == Vec{1.0});
    CHECK(d.y_hi == Vec{-1.0});
  }
}

TEST_CASE("a zero field leaves every recorded state identical") {
  LiftedSystem sys = one_dim_system(ZeroField{}, "still", 0.5, 1.5);
  EmbeddingState s0;
  s0.y_lo = {0.5};
  s0.y_hi = {1.5};
  const EmbeddingTrajectory traj =
      reachlp::integrate_embedding(sys, s0, 0.25, 1.0);
  REQUIRE(traj.states.size() == 5);
  CHECK_FALSE(traj.order_violated);
  for (const EmbeddingState& st : traj.states) {
    CHECK(st.y_lo == s0.y_lo);
    CHECK(st.y_hi == s0.y_hi);
  }
}

TEST_CASE("constant growth accumulates exactly like the explicit sum") {
  LiftedSystem sys = one_dim_system(BandField{}, "band", 0.0, 0.0);
  EmbeddingState s0;
  s0.y_lo = {0.0};
  s0.y_hi = {0.0};
  ReachOptions off;
  off.refine = false;
  const EmbeddingTrajectory traj =
      reachlp::integrate_embedding(sys, s0, 0.1, 1.0, off);
  REQUIRE(traj.states.size() == 11);
  double expect = 0.0;
  for (std::size_t s = 0; s < 10; ++s) {
    expect += 0.1 * 1.0;
    CHECK(traj.states[s + 1].y_hi[0] == expect);
    CHECK(traj.states[s + 1].y_lo[0] == 0.0);
    CHECK(traj.times[s + 1] == (s + 1) * 0.1);
  }
  CHECK(traj.states.back().y_hi[0] == doctest::Approx(1.0).epsilon(1e-12));

  const EmbeddingTrajectory refined =
      reachlp::integrate_embedding(sys, s0, 0.1, 1.0);
  REQUIRE(refined.states.size() == traj.states.size());
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    CHECK(refined.states[s].y_lo == traj.states[s].y_lo);
    CHECK(refined.states[s].y_hi == traj.states[s].y_hi);
  }
}

TEST_CASE("refinement is inert for an identity lifting of van der Pol") {
  LiftedSystem sys;
  sys.H = Mat::identity(2);
  sys.H_plus = Mat::identity(2);
  sys.field = reachlp::vanderpol_field(1.0);
  sys.x0_box = reachlp::make_box({0.9, -0.1}, {1.1, 0.1});
  EmbeddingState s0;
  s0.y_lo = {0.9, -0.1};
  s0.y_hi = {1.1, 0.1};
  ReachOptions off;
  off.refine = false;
  const auto plain = reachlp::integrate_embedding(sys, s0, 0.05, 0.5, off);
  const auto refined = reachlp::integrate_embedding(sys, s0, 0.05, 0.5);
  CHECK_FALSE(plain.order_violated);
  REQUIRE(plain.states.size() == refined.states.size());
  for (std::size_t s = 0; s < plain.states.size(); ++s) {
    CHECK(refined.states[s].y_lo == plain.states[s].y_lo);
    CHECK(refined.states[s].y_hi == plain.states[s].y_hi);
  }
}

TEST_CASE("redundant refinement only tightens the van der Pol tube") {
  const LiftedSystem sys = reachlp::vanderpol_scenario(1.0);
  const IntervalVector y0 = sys.lift_initial();
  EmbeddingState s0;
  for (const Interval& y : y0) {
    s0.y_lo.push_back(y.lo);
    s0.y_hi.push_back(y.hi);
  }
  const double dt = reachlp::snap_time_step(0.1, 5e-3);
  ReachOptions off;
  off.refine = false;
  const auto loose = reachlp::integrate_embedding(sys, s0, dt, 0.1, off);
  const auto tight = reachlp::integrate_embedding(sys, s0, dt, 0.1);
  CHECK_FALSE(loose.order_violated);
  CHECK_FALSE(tight.order_violated);
  REQUIRE(tight.states.size() == loose.states.size());
  for (std::size_t s = 0; s < tight.states.size(); ++s)
    for (std::size_t j = 0; j < sys.lifted_dim(); ++j) {
      CHECK(tight.states[s].y_lo[j] >= loose.states[s].y_lo[j] - 1e-9);
      CHECK(tight.states[s].y_hi[j] <= loose.states[s].y_hi[j] + 1e-9);
    }
}

TEST_CASE("scenario liftings validate and lift the initial box exactly") {
  const LiftedSystem vdp = reachlp::vanderpol_scenario(1.0);
  CHECK_NOTHROW(vdp.validate());
  CHECK(vdp.lifted_dim() == 4);
  CHECK(vdp.state_dim() == 2);
  const IntervalVector y0 = vdp.lift_initial();
  REQUIRE(y0.size() == 4);
  CHECK(y0[0].lo == 0.9);
  CHECK(y0[0].hi == 1.1);
  CHECK(y0[1].lo == -0.1);
  CHECK(y0[1].hi == 0.1);
  CHECK(y0[2].lo == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(y0[2].hi == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(y0[3].lo == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(y0[3].hi == doctest::Approx(1.2).epsilon(1e-15));

  const LiftedSystem bike = reachlp::bicycle_scenario();
  CHECK_NOTHROW(bike.validate());
  CHECK(bike.lifted_dim() == 8);
  CHECK(bike.state_dim() == 4);
  CHECK(bike.w_box.size() == 4);

  LiftedSystem bad = reachlp::vanderpol_scenario(1.0);
  bad.H_plus(0, 0) = 2.0;
  CHECK_THROWS_AS(bad.validate(), reachlp::DimensionMismatch);
}

TEST_CASE("integration truncates when the face order breaks") {
  LiftedSystem sys = one_dim_system(SteepField{}, "steep", -1.0, 1.0);
  EmbeddingState s0;
  s0.y_lo = {-1.0};
  s0.y_hi = {1.0};
  const EmbeddingTrajectory traj =
      reachlp::integrate_embedding(sys, s0, 0.3, 0.6);
  CHECK(traj.order_violated);
  CHECK(traj.violation_step == 1);
  REQUIRE(traj.states.size() == 1);
  CHECK(traj.states[0].y_lo == s0.y_lo);
  CHECK(traj.times == Vec{0.0});
}

TEST_CASE("integration rejects malformed starts and grids") {
  LiftedSystem sys = one_dim_system(ZeroField{}, "still", 0.0, 1.0);
  EmbeddingState bad;
  bad.y_lo = {1.0};
  bad.y_hi = {0.0};
  CHECK_THROWS_AS(reachlp::integrate_embedding(sys, bad, 0.1, 1.0),
                  reachlp::DomainError);
  EmbeddingState wrong;
  wrong.y_lo = {0.0, 1.0};
  wrong.y_hi = {1.0, 2.0};
  CHECK_THROWS_AS(reachlp::integrate_embedding(sys, wrong, 0.1, 1.0),
                  reachlp::DimensionMismatch);
  EmbeddingState ok;
  ok.y_lo = {0.0};
  ok.y_hi = {1.0};
  CHECK_THROWS_AS(reachlp::integrate_embedding(sys, ok, 0.3, 1.0),
                  reachlp::DomainError);
}

TEST_CASE("snap_time_step picks the divisor nearest the request") {
  const double tau = 2.0 * std::numbers::pi;
  const double dt = reachlp::snap_time_step(tau, 5e-3);
  CHECK(dt == tau / 1257.0);
  CHECK(reachlp::snap_time_step(1.0, 0.3) == 1.0 / 3.0);
  CHECK(reachlp::snap_time_step(1.0, 2.0) == 1.0);  // never more than t_final
  CHECK_THROWS_AS(reachlp::snap_time_step(0.0, 0.1), reachlp::DomainError);
  CHECK_THROWS_AS(reachlp::snap_time_step(1.0, 0.0), reachlp::DomainError);
}

TEST_CASE("a distant obstacle scores exactly zero") {
  LiftedSystem sys = toy_integrator(-0.05, 0.05);
  Mat u_ff(4, 1);
  for (std::size_t s = 0; s < 4; ++s) u_ff(s, 0) = 0.1;
  NudgeConfig cfg;
  cfg.dt = 0.05;
  cfg.horizon = 0.2;
  ObstacleSpec far;
  far.center = {1e6};
  far.radius = 3.0;
  const auto ev = reachlp::safety_check_detailed(u_ff, sys, far, cfg);
  CHECK(ev.value == 0.0);
  REQUIRE(ev.per_step_bound.size() == ev.trajectory.states.size());
  for (double b : ev.per_step_bound) CHECK(b < 0.0);

  const auto res = reachlp::nudge(u_ff, sys, far, cfg);
  CHECK(res.converged);
  CHECK(res.iterations == 0);
  CHECK(res.u_ff == u_ff);
  REQUIRE(res.safety_history.size() == 1);
  CHECK(res.safety_history[0] == 0.0);
}

TEST_CASE("sitting at the obstacle center costs radius squared per unit") {
  LiftedSystem sys = one_dim_system(ZeroField{}, "still", 0.0, 0.0);
  NudgeConfig cfg;
  cfg.dt = 1.0;
  cfg.horizon = 1.0;
  ObstacleSpec obst;
  obst.center = {0.0};
  obst.radius = 3.0;
  const double v = reachlp::safety_check(Mat(), sys, obst, cfg);
  CHECK(v == 9.0);
}

TEST_CASE("safety value recomputes from the recorded bounds") {
  LiftedSystem sys = toy_integrator(-0.05, 0.05);
  Mat u_ff(4, 1);
  u_ff(0, 0) = 2.0;
  u_ff(1, 0) = 2.0;
  u_ff(2, 0) = 2.0;
  u_ff(3, 0) = 2.0;
  NudgeConfig cfg;
  cfg.dt = 0.05;
  cfg.horizon = 0.2;
  ObstacleSpec obst;
  obst.center = {0.5};
  obst.radius = 0.3;
  const auto ev = reachlp::safety_check_detailed(u_ff, sys, obst, cfg);
  CHECK(ev.value > 0.0);
  REQUIRE(ev.per_step_bound.size() == ev.trajectory.states.size());
  double expect = 0.0;
  for (std::size_t i = 0; i + 1 < ev.trajectory.states.size(); ++i)
    expect += std::max(ev.per_step_bound[i], 0.0) * cfg.dt;
  CHECK(ev.value == expect);
}

TEST_CASE("truncated trajectories only charge completed steps") {
  LiftedSystem sys = one_dim_system(SteepField{}, "steep", -1.0, 1.0);
  NudgeConfig cfg;
  cfg.dt = 0.3;
  cfg.horizon = 0.6;
  ObstacleSpec obst;
  obst.center = {0.0};
  obst.radius = 5.0;
  const auto ev = reachlp::safety_check_detailed(Mat(), sys, obst, cfg);
  CHECK(ev.trajectory.order_violated);
  REQUIRE(ev.trajectory.states.size() == 1);
  REQUIRE(ev.per_step_bound.size() == 1);
  CHECK(ev.value == 0.0);  // the only recorded state opens no completed step
}

TEST_CASE("gradient agrees with central differences on the toy integrator") {
  LiftedSystem sys = toy_integrator(-0.05, 0.05);
  Mat u_ff(4, 1);
  u_ff(0, 0) = 2.0;
  u_ff(1, 0) = 1.8;
  u_ff(2, 0) = 1.6;
  u_ff(3, 0) = 1.4;
  NudgeConfig cfg;
  cfg.dt = 0.05;
  cfg.horizon = 0.2;
  ObstacleSpec obst;
  obst.center = {0.5};
  obst.radius = 0.3;

  Mat grad;
  const double v = reachlp::safety_gradient(u_ff, sys, obst, cfg, grad);
  CHECK(v == reachlp::safety_check(u_ff, sys, obst, cfg));
  CHECK(v > 0.0);
  REQUIRE(grad.rows() == 4);
  REQUIRE(grad.cols() == 1);

  const double h = 1e-5;
  bool any_nonzero = false;
  for (std::size_t s = 0; s < 4; ++s) {
    const double fd = oracle::central_diff(
        [&](double t) {
          Mat u = u_ff;
          u(s, 0) += t;
          return reachlp::safety_check(u, sys, obst, cfg);
        },
        h);
    const double tol = 1e-4 * std::max(1.0, std::fabs(fd));
    CHECK(std::fabs(grad(s, 0) - fd) <= tol);
    if (std::fabs(grad(s, 0)) > 1e-12) any_nonzero = true;
  }
  CHECK(any_nonzero);
}

TEST_CASE("gradient value matches the plain evaluation bitwise") {
  // Redundant lifting, refinement on: the dual LP sweep must replay the
  // plain sweep's arithmetic exactly on the value lane.
  const LiftedSystem sys = reachlp::bicycle_scenario();
  NudgeConfig cfg;
  cfg.dt = 5e-3;
  cfg.horizon = 0.05;
  const Mat u_ff = reachlp::bicycle_nominal_input(10, cfg.dt);
  ObstacleSpec obst;
  obst.center = {7.5, 6.5};  // close enough to make the value strictly positive
  obst.radius = 3.0;

  const double plain = reachlp::safety_check(u_ff, sys, obst, cfg);
  Mat grad;
  const double dual = reachlp::safety_gradient(u_ff, sys, obst, cfg, grad);
  CHECK(plain > 0.0);
  CHECK(dual == plain);

  bool any_nonzero = false;
  for (std::size_t s = 0; s < grad.rows(); ++s)
    for (std::size_t c = 0; c < grad.cols(); ++c)
      if (grad(s, c) != 0.0) any_nonzero = true;
  CHECK(any_nonzero);

  ReachOptions off;
  off.refine = false;
  const double plain_off = reachlp::safety_check(u_ff, sys, obst, cfg, off);
  Mat grad_off;
  const double dual_off =
      reachlp::safety_gradient(u_ff, sys, obst, cfg, grad_off, off);
  CHECK(dual_off == plain_off);
}

TEST_CASE("nudging steers the toy integrator clear of the obstacle") {
  LiftedSystem sys = toy_integrator(-0.05, 0.05);
  Mat u_ff(4, 1);
  for (std::size_t s = 0; s < 4; ++s) u_ff(s, 0) = 2.0;
  NudgeConfig cfg;
  cfg.dt = 0.05;
  cfg.horizon = 0.2;
  cfg.eta = 20.0;
  ObstacleSpec obst;
  obst.center = {0.5};
  obst.radius = 0.3;

  const double before = reachlp::safety_check(u_ff, sys, obst, cfg);
  CHECK(before > 0.0);
  const auto res = reachlp::nudge(u_ff, sys, obst, cfg);
  CHECK(res.converged);
  CHECK(res.iterations >= 1);
  CHECK(res.iterations <= cfg.max_outer_iters);
  CHECK(reachlp::safety_check(res.u_ff, sys, obst, cfg) == 0.0);
  REQUIRE(res.safety_history.size() >= 2);
  CHECK(res.safety_history.front() == before);
  for (std::size_t i = 1; i < res.safety_history.size(); ++i)
    CHECK(res.safety_history[i] < res.safety_history[i - 1]);
  CHECK(res.safety_history.back() == 0.0);

  // Re-nudging a safe schedule is a no-op.
  const auto again = reachlp::nudge(res.u_ff, sys, obst, cfg);
  CHECK(again.converged);
  CHECK(again.iterations == 0);
  CHECK(again.u_ff == res.u_ff);
}

TEST_CASE("bicycle field evaluates the documented point") {
  const reachlp::VectorField f = reachlp::bicycle_field();
  Vec x = {0.0, 0.0, 0.0, 1.0};
  Vec u = {0.0, 0.0};
  Vec w = {0.0, 0.0, 0.0, 0.0};
  Vec out(4);
  f.point(x, u, w, out);
  CHECK(out[0] == 1.0);  // cos(0) * v
  CHECK(out[1] == 0.0);
  CHECK(out[2] == 0.0);
  CHECK(out[3] == 0.0);
}

TEST_CASE("van der Pol field evaluates the documented point") {
  const reachlp::VectorField f = reachlp::vanderpol_field(1.0);
  Vec x = {1.0, 0.0};
  Vec out(2);
  f.point(x, {}, {}, out);
  CHECK(out[0] == 1.0 - 1.0 / 3.0);
  CHECK(out[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(out[1] == 1.0);
}
