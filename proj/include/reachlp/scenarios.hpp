// Ready-made demo scenarios shared by the CLI, the benchmarks and the tests.
#pragma once

#include <cstddef>

#include "reachlp/reach.hpp"

namespace reachlp {

// Van der Pol oscillator lifted through [I2; (1,1); (1,-1)], starting from
// the box [0.9, 1.1] x [-0.1, 0.1].  Autonomous: no inputs, no disturbance.
LiftedSystem vanderpol_scenario(double mu = 1.0);

// Kinematic bicycle (lf = lr = 1) lifted through [I4; H2] with H2 coupling
// each position coordinate to the heading, starting from the point
// (8, 7, -2/pi, 2) with a small additive disturbance box.  Pure feedforward
// (no feedback gain).
LiftedSystem bicycle_scenario(double disturbance = 1e-3);

// Nominal input schedule for the bicycle demo: gentle throttle plus a
// steering ramp that carries the vehicle toward the obstacle at (4, 4), so
// the unmodified schedule is unsafe and nudging has work to do.
Mat bicycle_nominal_input(std::size_t steps, double dt);

// The demo obstacle: ball of radius 3 centered at (4, 4) in position space.
ObstacleSpec bicycle_obstacle();

}  // namespace reachlp
