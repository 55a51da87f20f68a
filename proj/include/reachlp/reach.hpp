// Reachable-tube computation on lifted coordinates.
//
// A system ẋ = f(x, u, w) is lifted through a tall full-rank matrix H
// (y = Hx, x = H⁺y).  Bounds are propagated as a pair of face vectors
// (y_lo, y_hi); the redundancy in H lets each face be tightened by
// solving small LPs against the invariant subspace y ∈ range(H).
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "reachlp/interval.hpp"
#include "reachlp/linalg.hpp"
#include "reachlp/simplex.hpp"
#include "reachlp/systems.hpp"

namespace reachlp {

// Closed-loop lifted scenario: dynamics, lifting pair, feedforward input
// schedule, optional feedback gain with nominal trajectory, disturbance
// box, and the initial state box (in x coordinates).
struct LiftedSystem {
    Mat H;            // m_lift x n, full column rank
    Mat H_plus;       // n x m_lift, left inverse of H
    VectorField field;
    Mat u_ff;         // steps x input_dim, row s applies on [s*dt, (s+1)*dt)
    std::optional<Mat> K;      // input_dim x n feedback gain
    std::optional<Mat> x_nom;  // steps x n nominal states for feedback
    IntervalVector w_box;      // disturbance bounds, size dist_dim
    IntervalVector x0_box;     // initial state bounds, size n

    std::size_t lifted_dim() const { return H.rows(); }
    std::size_t state_dim() const { return H.cols(); }
    std::size_t steps() const { return u_ff.rows(); }
    // Checks shapes and H_plus * H = I to `tol`.
    void validate(double tol = 1e-10) const;
    // Initial face vectors: hull of H * x0_box.
    IntervalVector lift_initial() const;
};

// Lower/upper face vectors of the lifted box, each of size lifted_dim.
struct EmbeddingState {
    Vec y_lo;
    Vec y_hi;
};

// Ball obstacle in state coordinates; the avoidance function is
// o(x) = r^2 - |x_c - c|^2 over the coordinates center covers, positive
// inside the ball.
struct ObstacleSpec {
    Vec center;
    double radius = 1.0;
};

struct NudgeConfig {
    double eta = 0.05;               // initial gradient step size
    std::size_t max_outer_iters = 100;
    double dt = 5e-3;
    double horizon = 1.0;            // integration window [0, horizon]
};

// Result of tightening one lifted box against range(H).
struct RefineOutcome {
    Vec z_lo;
    Vec z_hi;
    // Component j kept its input value because the j-th LP did not
    // return success (infeasible boxes, iteration caps, ...).
    std::vector<bool> fallback_lo;
    std::vector<bool> fallback_hi;
    bool any_fallback() const;
};

struct RefineCallInfo {
    Vec y_lo;
    Vec y_hi;
    RefineOutcome result;
};

struct ReachOptions {
    bool refine = true;
    SimplexConfig lp;
    std::size_t threads = 1;  // batch width for the per-call refinement LPs
    // Observes every refinement call (for containment audits).
    std::function<void(const RefineCallInfo&)> refine_observer;
};

// Tightens [y_lo, y_hi] against the subspace y = Hx: for each component j
// solves min/max y_j subject to y_lo <= Hx <= y_hi over free x.  The 2m
// LPs of one call are solved as a batch.  Components whose LP fails keep
// their input bound and are flagged.
RefineOutcome refine(const Vec& y_lo, const Vec& y_hi, const Mat& H,
                     const SimplexConfig& cfg = {}, std::size_t threads = 1);

// One evaluation of the embedding vector field at time step `step`:
// d/dt of (y_lo, y_hi).  Component i of the lower (upper) face flattens
// the box onto y_i = y_lo_i (y_hi_i), optionally refines, pulls back
// through H⁺, applies u = u_ff + K (x - x_nom), and takes the lower
// (upper) bound of row_i(H) · f(x, u, w).
EmbeddingState embedding_dynamics(const EmbeddingState& s, std::size_t step,
                                  const LiftedSystem& sys,
                                  const ReachOptions& opt = {});

struct EmbeddingTrajectory {
    Vec times;
    std::vector<EmbeddingState> states;
    // Set when some component ordering y_lo <= y_hi broke; integration
    // stops at that step and keeps the prefix.
    bool order_violated = false;
    std::size_t violation_step = 0;
    std::size_t refine_fallbacks = 0;
};

// Explicit-Euler integration of the embedding system from s0 over
// [0, t_final] with fixed dt; t_final/dt must be integral.
EmbeddingTrajectory integrate_embedding(const LiftedSystem& sys,
                                        const EmbeddingState& s0, double dt,
                                        double t_final,
                                        const ReachOptions& opt = {});

// Nearest step size to dt_request that divides t_final into a whole number
// of steps (at least one).
double snap_time_step(double t_final, double dt_request);

struct SafetyEvaluation {
    double value = 0.0;
    // Upper bound of the obstacle function over the box at each recorded
    // state (size = states recorded).
    Vec per_step_bound;
    EmbeddingTrajectory trajectory;
};

// Safety functional: sum over steps of max(bound(t), 0) * dt, where
// bound(t) is the interval upper bound of the obstacle function over the
// state box at the step start (left endpoint rule).  Zero exactly when
// the tube clears the obstacle at every step.  The initial box comes
// from sys.x0_box lifted through H; u_ff overrides sys.u_ff.
double safety_check(const Mat& u_ff, const LiftedSystem& sys,
                    const ObstacleSpec& obstacle, const NudgeConfig& cfg,
                    const ReachOptions& opt = {});

SafetyEvaluation safety_check_detailed(const Mat& u_ff,
                                       const LiftedSystem& sys,
                                       const ObstacleSpec& obstacle,
                                       const NudgeConfig& cfg,
                                       const ReachOptions& opt = {});

// Safety value together with its gradient with respect to every entry of
// u_ff (forward tangents through the integration, the refinement LPs and
// the left-endpoint sum).  grad has the shape of u_ff.
double safety_gradient(const Mat& u_ff, const LiftedSystem& sys,
                       const ObstacleSpec& obstacle, const NudgeConfig& cfg,
                       Mat& grad, const ReachOptions& opt = {});

struct NudgeResult {
    Mat u_ff;
    std::size_t iterations = 0;
    bool converged = false;   // safety value reached exactly zero
    Vec safety_history;       // value after each accepted step (front = start)
    double eta_final = 0.0;
};

// Gradient descent on the feedforward schedule until the safety value
// reaches zero or the iteration budget runs out.  The step size halves
// whenever a step fails to decrease the value.  An already-safe input
// returns unchanged with zero iterations.
NudgeResult nudge(const Mat& u_ff0, const LiftedSystem& sys,
                  const ObstacleSpec& obstacle, const NudgeConfig& cfg,
                  const ReachOptions& opt = {});

}  // namespace reachlp
