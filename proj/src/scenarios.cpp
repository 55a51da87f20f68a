#include "reachlp/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "reachlp/systems.hpp"

namespace reachlp {

LiftedSystem vanderpol_scenario(double mu) {
  LiftedSystem sys;
  sys.H = Mat{{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {1.0, -1.0}};
  sys.H_plus = Mat{{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}};
  sys.field = vanderpol_field(mu);
  sys.u_ff = Mat(0, 0);
  sys.x0_box = make_box({0.9, -0.1}, {1.1, 0.1});
  return sys;
}

LiftedSystem bicycle_scenario(double disturbance) {
  LiftedSystem sys;
  sys.H = Mat{{1.0, 0.0, 0.0, 0.0},
              {0.0, 1.0, 0.0, 0.0},
              {0.0, 0.0, 1.0, 0.0},
              {0.0, 0.0, 0.0, 1.0},
              {1.0, 0.0, 1.0, 0.0},
              {1.0, 0.0, -1.0, 0.0},
              {0.0, 1.0, 1.0, 0.0},
              {0.0, 1.0, -1.0, 0.0}};
  sys.H_plus = Mat(4, 8);
  for (std::size_t i = 0; i < 4; ++i) sys.H_plus(i, i) = 1.0;
  sys.field = bicycle_field(1.0, 1.0);
  sys.u_ff = Mat(0, 2);
  const double d = std::abs(disturbance);
  sys.w_box = make_box({-d, -d, -d, -d}, {d, d, d, d});
  const Vec x0{8.0, 7.0, -2.0 / std::numbers::pi, 2.0};
  sys.x0_box = make_box(x0, x0);
  return sys;
}

Mat bicycle_nominal_input(std::size_t steps, double dt) {
  // Strong throttle with the wheel ramping to a hard right turn over the
  // first 0.22 time units: the path carves through the obstacle disc around
  // t = 0.8..1.0 and exits on its own, so the violation sits mid-horizon.
  Mat u(steps, 2);
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = s * dt;
    u(s, 0) = 4.2;
    u(s, 1) = -1.2 * std::min(t / 0.22, 1.0);
  }
  return u;
}

ObstacleSpec bicycle_obstacle() { return ObstacleSpec{{4.0, 4.0}, 3.0}; }

}  // namespace reachlp
