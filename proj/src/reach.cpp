#include "reachlp/reach.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "reachlp/autodiff.hpp"
#include "reachlp/dual.hpp"
#include "reachlp/errors.hpp"
#include "reachlp/lp_core.hpp"

namespace reachlp {

bool RefineOutcome::any_fallback() const {
  for (bool f : fallback_lo)
    if (f) return true;
  for (bool f : fallback_hi)
    if (f) return true;
  return false;
}

void LiftedSystem::validate(double tol) const {
  const std::size_t m = H.rows();
  const std::size_t n = H.cols();
  if (m == 0 || n == 0) throw DimensionMismatch("lifting matrix is empty");
  if (m < n)
    throw DimensionMismatch(
        "lifting matrix must have at least as many rows as columns");
  if (H_plus.rows() != n || H_plus.cols() != m)
    throw DimensionMismatch("left inverse must be state_dim x lifted_dim");
  const Mat prod = mat_mul(H_plus, H);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double want = i == j ? 1.0 : 0.0;
      if (std::abs(prod(i, j) - want) > tol)
        throw DimensionMismatch("H_plus is not a left inverse of H");
    }
  if (!field.point || !field.box || !field.dual_box)
    throw Error("vector field callbacks are unset");
  if (field.state_dim != n)
    throw DimensionMismatch("field state dimension vs lifting columns");
  if (u_ff.rows() > 0 && u_ff.cols() != field.input_dim)
    throw DimensionMismatch("input schedule width vs field input dimension");
  if (K) {
    if (K->rows() != field.input_dim || K->cols() != n)
      throw DimensionMismatch("feedback gain must be input_dim x state_dim");
    if (!x_nom) throw Error("feedback gain requires a nominal trajectory");
  }
  if (x_nom) {
    if (x_nom->cols() != n)
      throw DimensionMismatch("nominal trajectory width vs state dimension");
    if (x_nom->rows() < u_ff.rows())
      throw DimensionMismatch("nominal trajectory shorter than input schedule");
  }
  if (w_box.size() != field.dist_dim)
    throw DimensionMismatch(
        "disturbance box size vs field disturbance dimension");
  if (!x0_box.empty() && x0_box.size() != n)
    throw DimensionMismatch("initial state box size vs state dimension");
}

IntervalVector LiftedSystem::lift_initial() const {
  if (x0_box.size() != H.cols())
    throw DimensionMismatch("initial state box is unset or mis-sized");
  return mat_vec(H, x0_box);
}

namespace {

// Conservative slack added to LP-computed face bounds: the solver rounds to
// nearest, so an exact extremum can land an ulp inside the true range.  The
// slack is clamped back into the input box, preserving the sandwich.
constexpr double kWidenEps = 1e-12;

double widen_down(double v) { return v - kWidenEps * (1.0 + std::abs(v)); }
double widen_up(double v) { return v + kWidenEps * (1.0 + std::abs(v)); }

std::size_t count_steps(double t_final, double dt) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (t_final < 0.0) throw DomainError("horizon must be nonnegative");
  const double raw = t_final / dt;
  const double rounded = std::round(raw);
  if (std::abs(raw - rounded) > 1e-9 * std::max(1.0, raw))
    throw DomainError("horizon must be an integer multiple of the time step");
  return static_cast<std::size_t>(rounded);
}

// Constraint block y_lo <= H x <= y_hi written as A_ub x <= b_ub.
void box_constraints(const Mat& H, const Vec& y_lo, const Vec& y_hi, Mat& A,
                     Vec& b) {
  const std::size_t m = H.rows();
  const std::size_t n = H.cols();
  A = Mat(2 * m, n);
  b.assign(2 * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      A(i, j) = H(i, j);
      A(m + i, j) = -H(i, j);
    }
    b[i] = y_hi[i];
    b[m + i] = -y_lo[i];
  }
}

template <class S>
std::vector<TInterval<S>> faces_to_box(const std::vector<S>& lo,
                                       const std::vector<S>& hi) {
  std::vector<TInterval<S>> box;
  box.reserve(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) box.emplace_back(lo[i], hi[i]);
  return box;
}

template <class S>
std::vector<TInterval<S>> lift_w(const IntervalVector& w) {
  std::vector<TInterval<S>> out;
  out.reserve(w.size());
  for (const Interval& wi : w) out.emplace_back(S(wi.lo), S(wi.hi));
  return out;
}

// u = u_row + K (x - x_nom(step)) as intervals; without feedback the inputs
// are degenerate.
template <class S>
std::vector<TInterval<S>> input_box(const LiftedSystem& sys, std::size_t step,
                                    const std::vector<S>& u_row,
                                    const std::vector<TInterval<S>>& xbox) {
  std::vector<TInterval<S>> u;
  u.reserve(u_row.size());
  for (std::size_t j = 0; j < u_row.size(); ++j) {
    TInterval<S> uj(u_row[j]);
    if (sys.K) {
      for (std::size_t c = 0; c < sys.H.cols(); ++c) {
        const double kjc = (*sys.K)(j, c);
        if (kjc == 0.0) continue;
        const TInterval<S> diff =
            xbox[c] - TInterval<S>(S((*sys.x_nom)(step, c)));
        uj = uj + TInterval<S>(S(kjc)) * diff;
      }
    }
    u.push_back(uj);
  }
  return u;
}

inline void call_field(const VectorField& f, const std::vector<Interval>& x,
                       const std::vector<Interval>& u,
                       const std::vector<Interval>& w,
                       std::vector<Interval>& out) {
  f.box(x, u, w, out);
}

inline void call_field(const VectorField& f, const std::vector<DualInterval>& x,
                       const std::vector<DualInterval>& u,
                       const std::vector<DualInterval>& w,
                       std::vector<DualInterval>& out) {
  f.dual_box(x, u, w, out);
}

// Lower (upper) bound of row_i(H) . f over the box image, picked by
// coefficient sign.
template <class S>
S face_dot(const Mat& H, std::size_t i, const std::vector<TInterval<S>>& f,
           bool lower) {
  S acc(0.0);
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double h = H(i, j);
    if (h == 0.0) continue;
    const bool take_lo = (h > 0.0) == lower;
    acc = acc + S(h) * (take_lo ? f[j].lo : f[j].hi);
  }
  return acc;
}

// Upper bound of r^2 - |x_c - c|^2 over the box (the coordinates the center
// covers).
template <class S>
S obstacle_bound(const std::vector<TInterval<S>>& xbox, const ObstacleSpec& o) {
  if (o.center.size() > xbox.size())
    throw DimensionMismatch(
        "obstacle center has more coordinates than the state");
  TInterval<S> acc(S(o.radius * o.radius));
  for (std::size_t i = 0; i < o.center.size(); ++i)
    acc = acc - sqr(xbox[i] - TInterval<S>(S(o.center[i])));
  return acc.hi;
}

// One embedding derivative evaluation.  Face i of the lower (upper) bound
// flattens the box onto that face, refines, pulls back through H_plus, and
// takes the matching bound of row_i(H) . f.  The face loop is sequential;
// parallelism lives inside the refinement batch.
template <class S, class RefineFn>
void step_derivative(const std::vector<S>& lo, const std::vector<S>& hi,
                     std::size_t step, const LiftedSystem& sys,
                     const std::vector<S>& u_row, const RefineFn& refine_fn,
                     std::vector<S>& dlo, std::vector<S>& dhi) {
  const std::size_t m = sys.lifted_dim();
  dlo.assign(m, S(0.0));
  dhi.assign(m, S(0.0));
  const auto wbox = lift_w<S>(sys.w_box);
  std::vector<TInterval<S>> f(sys.field.state_dim, TInterval<S>(S(0.0)));
  for (std::size_t i = 0; i < m; ++i) {
    for (const bool lower : {true, false}) {
      std::vector<S> zlo = lo;
      std::vector<S> zhi = hi;
      if (lower)
        zhi[i] = zlo[i];
      else
        zlo[i] = zhi[i];
      refine_fn(zlo, zhi);
      const auto ybox = faces_to_box(zlo, zhi);
      const auto xbox = mat_vec(sys.H_plus, ybox);
      const auto ubox = input_box(sys, step, u_row, xbox);
      call_field(sys.field, xbox, ubox, wbox, f);
      (lower ? dlo : dhi)[i] = face_dot(sys.H, i, f, lower);
    }
  }
}

std::size_t count_flags(const RefineOutcome& r) {
  std::size_t c = 0;
  for (bool f : r.fallback_lo) c += f;
  for (bool f : r.fallback_hi) c += f;
  return c;
}

// Tightening with directional derivatives carried through the LPs.  The
// canonical form is built once per call; only the objective row changes
// between the 2m solves, so the rhs tangent block is shared.  Mirrors the
// plain refine arithmetic exactly (same tableaus, same pivot decisions).
void refine_dual_faces(
    std::vector<Dual>& zlo, std::vector<Dual>& zhi, const Mat& H,
    const SimplexConfig& cfg, std::size_t k, std::size_t& fallbacks,
    const std::function<void(const RefineCallInfo&)>& observer) {
  const std::size_t m = H.rows();
  const std::size_t n = H.cols();
  Vec in_lo(m), in_hi(m);
  for (std::size_t i = 0; i < m; ++i) {
    in_lo[i] = zlo[i].value();
    in_hi[i] = zhi[i].value();
  }
  GeneralLP g;
  g.c.assign(n, 0.0);
  g.unbounded = true;
  box_constraints(H, in_lo, in_hi, g.A_ub, g.b_ub);
  Mat db_ub(2 * m, k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t d = 0; d < k; ++d) {
      db_ub(i, d) = zhi[i].deriv(d);
      db_ub(m + i, d) = -zlo[i].deriv(d);
    }
  CanonicalLP p = canonicalize(g);
  const Mat db = canonical_rhs_tangents(p.recovery, db_ub, Mat());

  RefineOutcome rep;
  rep.z_lo.assign(m, 0.0);
  rep.z_hi.assign(m, 0.0);
  rep.fallback_lo.assign(m, false);
  rep.fallback_hi.assign(m, false);

  for (std::size_t j = 0; j < m; ++j) {
    Dual cand[2];  // [0] = lower bound, [1] = upper bound
    bool fell[2] = {false, false};
    for (int side = 0; side < 2; ++side) {
      const double sign = side == 0 ? 1.0 : -1.0;
      std::fill(p.c.begin(), p.c.begin() + 2 * n, 0.0);
      for (std::size_t jj = 0; jj < n; ++jj) {
        p.c[jj] = sign * H(j, jj);
        p.c[n + jj] = -sign * H(j, jj);
      }
      const auto out = solve_canonical_with_rhs_tangents(p, db, cfg);
      if (out.base.status.success) {
        Vec dd = out.dfun;
        double v = out.base.fun;
        if (side == 1) {
          v = -v;
          for (double& t : dd) t = -t;
        }
        cand[side] =
            Dual(side == 0 ? widen_down(v) : widen_up(v), std::move(dd));
      } else {
        cand[side] = side == 0 ? zlo[j] : zhi[j];
        fell[side] = true;
      }
    }
    // Clamp into the input box (value comparison; a clamp adopts the input
    // bound's derivative), then repair ulp-level inversions.
    for (int side = 0; side < 2; ++side) {
      if (cand[side].value() < in_lo[j]) cand[side] = zlo[j];
      if (cand[side].value() > in_hi[j]) cand[side] = zhi[j];
    }
    if (cand[0].value() > cand[1].value()) {
      std::swap(cand[0], cand[1]);
      std::swap(fell[0], fell[1]);
    }
    zlo[j] = cand[0];
    zhi[j] = cand[1];
    rep.z_lo[j] = cand[0].value();
    rep.z_hi[j] = cand[1].value();
    rep.fallback_lo[j] = fell[0];
    rep.fallback_hi[j] = fell[1];
  }
  fallbacks += count_flags(rep);
  if (observer) observer(RefineCallInfo{in_lo, in_hi, std::move(rep)});
}

// Plain embedding derivative with refinement fallback accounting.
EmbeddingState rhs_plain(const EmbeddingState& s, std::size_t step,
                         const LiftedSystem& sys, const ReachOptions& opt,
                         std::size_t& fallbacks) {
  const std::size_t m = sys.lifted_dim();
  if (s.y_lo.size() != m || s.y_hi.size() != m)
    throw DimensionMismatch("embedding state size vs lifted dimension");
  const std::size_t p = sys.field.input_dim;
  if (p > 0 && step >= sys.u_ff.rows())
    throw DimensionMismatch("step index past the end of the input schedule");
  if (sys.K && step >= sys.x_nom->rows())
    throw DimensionMismatch(
        "step index past the end of the nominal trajectory");
  std::vector<double> u_row(p);
  for (std::size_t c = 0; c < p; ++c) u_row[c] = sys.u_ff(step, c);
  auto refine_fn = [&](std::vector<double>& zlo, std::vector<double>& zhi) {
    if (!opt.refine) return;
    RefineOutcome r = refine(zlo, zhi, sys.H, opt.lp, opt.threads);
    fallbacks += count_flags(r);
    if (opt.refine_observer)
      opt.refine_observer(RefineCallInfo{zlo, zhi, r});
    zlo = std::move(r.z_lo);
    zhi = std::move(r.z_hi);
  };
  EmbeddingState d;
  step_derivative<double>(s.y_lo, s.y_hi, step, sys, u_row, refine_fn, d.y_lo,
                          d.y_hi);
  return d;
}

[[noreturn]] void rethrow_at_step(std::size_t step, double dt,
                                  const DomainError& e) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "step %zu (t=%g): ", step, step * dt);
  throw DomainError(std::string(buf) + e.what());
}

}  // namespace

RefineOutcome refine(const Vec& y_lo, const Vec& y_hi, const Mat& H,
                     const SimplexConfig& cfg, std::size_t threads) {
  const std::size_t m = H.rows();
  const std::size_t n = H.cols();
  if (y_lo.size() != m || y_hi.size() != m)
    throw DimensionMismatch("face vector size vs lifting rows");
  Mat A;
  Vec b;
  box_constraints(H, y_lo, y_hi, A, b);
  std::vector<GeneralLP> problems(2 * m);
  for (std::size_t j = 0; j < m; ++j) {
    for (int side = 0; side < 2; ++side) {
      GeneralLP& g = problems[2 * j + side];
      g.A_ub = A;
      g.b_ub = b;
      g.unbounded = true;
      g.c.assign(n, 0.0);
      const double sign = side == 0 ? 1.0 : -1.0;
      for (std::size_t jj = 0; jj < n; ++jj) g.c[jj] = sign * H(j, jj);
    }
  }
  const auto outs = solve_batch(problems, cfg, threads);

  RefineOutcome r;
  r.z_lo.assign(m, 0.0);
  r.z_hi.assign(m, 0.0);
  r.fallback_lo.assign(m, false);
  r.fallback_hi.assign(m, false);
  for (std::size_t j = 0; j < m; ++j) {
    double cand[2];
    bool fell[2] = {false, false};
    if (outs[2 * j].status.success) {
      cand[0] = widen_down(outs[2 * j].fun);
    } else {
      cand[0] = y_lo[j];
      fell[0] = true;
    }
    if (outs[2 * j + 1].status.success) {
      cand[1] = widen_up(-outs[2 * j + 1].fun);
    } else {
      cand[1] = y_hi[j];
      fell[1] = true;
    }
    for (int side = 0; side < 2; ++side) {
      if (cand[side] < y_lo[j]) cand[side] = y_lo[j];
      if (cand[side] > y_hi[j]) cand[side] = y_hi[j];
    }
    if (cand[0] > cand[1]) {
      std::swap(cand[0], cand[1]);
      std::swap(fell[0], fell[1]);
    }
    r.z_lo[j] = cand[0];
    r.z_hi[j] = cand[1];
    r.fallback_lo[j] = fell[0];
    r.fallback_hi[j] = fell[1];
  }
  return r;
}

double snap_time_step(double t_final, double dt_request) {
  if (!(dt_request > 0.0) || !(t_final > 0.0))
    throw DomainError("snap_time_step needs positive horizon and step");
  const double steps = std::max(1.0, std::round(t_final / dt_request));
  return t_final / steps;
}

EmbeddingState embedding_dynamics(const EmbeddingState& s, std::size_t step,
                                  const LiftedSystem& sys,
                                  const ReachOptions& opt) {
  sys.validate();
  std::size_t dummy = 0;
  return rhs_plain(s, step, sys, opt, dummy);
}

EmbeddingTrajectory integrate_embedding(const LiftedSystem& sys,
                                        const EmbeddingState& s0, double dt,
                                        double t_final,
                                        const ReachOptions& opt) {
  sys.validate();
  const std::size_t m = sys.lifted_dim();
  const std::size_t steps = count_steps(t_final, dt);
  if (s0.y_lo.size() != m || s0.y_hi.size() != m)
    throw DimensionMismatch(
        "initial embedding state size vs lifted dimension");
  for (std::size_t i = 0; i < m; ++i)
    if (s0.y_lo[i] > s0.y_hi[i])
      throw DomainError(
          "initial embedding state has a lower face above its upper face");
  if (sys.field.input_dim > 0 && sys.u_ff.rows() < steps)
    throw DimensionMismatch(
        "input schedule shorter than the integration window");
  if (sys.K && sys.x_nom->rows() < steps)
    throw DimensionMismatch(
        "nominal trajectory shorter than the integration window");

  EmbeddingTrajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(s0);
  EmbeddingState cur = s0;
  for (std::size_t s = 0; s < steps; ++s) {
    EmbeddingState d;
    try {
      d = rhs_plain(cur, s, sys, opt, traj.refine_fallbacks);
    } catch (const DomainError& e) {
      rethrow_at_step(s, dt, e);
    }
    EmbeddingState next;
    next.y_lo.resize(m);
    next.y_hi.resize(m);
    bool ordered = true;
    for (std::size_t i = 0; i < m; ++i) {
      next.y_lo[i] = cur.y_lo[i] + dt * d.y_lo[i];
      next.y_hi[i] = cur.y_hi[i] + dt * d.y_hi[i];
      if (next.y_lo[i] > next.y_hi[i]) ordered = false;
    }
    if (!ordered) {
      traj.order_violated = true;
      traj.violation_step = s + 1;
      break;
    }
    cur = next;
    traj.times.push_back((s + 1) * dt);
    traj.states.push_back(cur);
  }
  return traj;
}

SafetyEvaluation safety_check_detailed(const Mat& u_ff,
                                       const LiftedSystem& sys,
                                       const ObstacleSpec& obstacle,
                                       const NudgeConfig& cfg,
                                       const ReachOptions& opt) {
  LiftedSystem s2 = sys;
  s2.u_ff = u_ff;
  s2.validate();
  const IntervalVector y0 = s2.lift_initial();
  EmbeddingState s0;
  s0.y_lo.reserve(y0.size());
  s0.y_hi.reserve(y0.size());
  for (const Interval& yi : y0) {
    s0.y_lo.push_back(yi.lo);
    s0.y_hi.push_back(yi.hi);
  }
  SafetyEvaluation ev;
  ev.trajectory = integrate_embedding(s2, s0, cfg.dt, cfg.horizon, opt);
  const auto& states = ev.trajectory.states;
  ev.per_step_bound.reserve(states.size());
  for (const EmbeddingState& st : states) {
    const auto box = faces_to_box(st.y_lo, st.y_hi);
    const auto xbox = mat_vec(s2.H_plus, box);
    ev.per_step_bound.push_back(obstacle_bound(xbox, obstacle));
  }
  // Left endpoint rule: each completed step contributes the bound at its
  // start; the final state opens no step.
  for (std::size_t i = 0; i + 1 < states.size(); ++i)
    ev.value += std::max(ev.per_step_bound[i], 0.0) * cfg.dt;
  return ev;
}

double safety_check(const Mat& u_ff, const LiftedSystem& sys,
                    const ObstacleSpec& obstacle, const NudgeConfig& cfg,
                    const ReachOptions& opt) {
  return safety_check_detailed(u_ff, sys, obstacle, cfg, opt).value;
}

double safety_gradient(const Mat& u_ff, const LiftedSystem& sys,
                       const ObstacleSpec& obstacle, const NudgeConfig& cfg,
                       Mat& grad, const ReachOptions& opt) {
  LiftedSystem s2 = sys;
  s2.u_ff = u_ff;
  s2.validate();
  grad = Mat(u_ff.rows(), u_ff.cols());
  const std::size_t p = s2.field.input_dim;
  const std::size_t steps = count_steps(cfg.horizon, cfg.dt);
  if (p == 0 || steps == 0)
    return safety_check(u_ff, sys, obstacle, cfg, opt);
  if (u_ff.rows() < steps)
    throw DimensionMismatch(
        "input schedule shorter than the integration window");
  if (s2.K && s2.x_nom->rows() < steps)
    throw DimensionMismatch(
        "nominal trajectory shorter than the integration window");
  const std::size_t m = s2.lifted_dim();
  const std::size_t k = steps * p;

  const IntervalVector y0 = s2.lift_initial();
  std::vector<Dual> lo, hi;
  lo.reserve(m);
  hi.reserve(m);
  for (const Interval& yi : y0) {
    lo.emplace_back(yi.lo);
    hi.emplace_back(yi.hi);
  }
  auto refine_fn = [&](std::vector<Dual>& zlo, std::vector<Dual>& zhi) {
    if (!opt.refine) return;
    std::size_t dummy = 0;
    refine_dual_faces(zlo, zhi, s2.H, opt.lp, k, dummy, opt.refine_observer);
  };
  Dual acc(0.0);
  std::vector<Dual> dlo, dhi;
  for (std::size_t s = 0; s < steps; ++s) {
    std::vector<Dual> u_row(p);
    for (std::size_t c = 0; c < p; ++c)
      u_row[c] = Dual::seeded(u_ff(s, c), k, s * p + c);
    try {
      step_derivative<Dual>(lo, hi, s, s2, u_row, refine_fn, dlo, dhi);
    } catch (const DomainError& e) {
      rethrow_at_step(s, cfg.dt, e);
    }
    std::vector<Dual> next_lo(m), next_hi(m);
    bool ordered = true;
    for (std::size_t i = 0; i < m; ++i) {
      next_lo[i] = lo[i] + Dual(cfg.dt) * dlo[i];
      next_hi[i] = hi[i] + Dual(cfg.dt) * dhi[i];
      if (next_lo[i].value() > next_hi[i].value()) ordered = false;
    }
    if (!ordered) break;  // truncate like the plain integrator
    // Left endpoint contribution of the step just completed; at an exact
    // zero the active branch is the bound itself.
    const auto box = faces_to_box(lo, hi);
    const auto xbox = mat_vec(s2.H_plus, box);
    const Dual b = obstacle_bound(xbox, obstacle);
    if (b.value() >= 0.0) acc = acc + b * Dual(cfg.dt);
    lo = std::move(next_lo);
    hi = std::move(next_hi);
  }
  for (std::size_t s = 0; s < steps; ++s)
    for (std::size_t c = 0; c < p; ++c) grad(s, c) = acc.deriv(s * p + c);
  return acc.value();
}

NudgeResult nudge(const Mat& u_ff0, const LiftedSystem& sys,
                  const ObstacleSpec& obstacle, const NudgeConfig& cfg,
                  const ReachOptions& opt) {
  NudgeResult res;
  res.u_ff = u_ff0;
  res.eta_final = cfg.eta;
  double cur = safety_check(res.u_ff, sys, obstacle, cfg, opt);
  res.safety_history.push_back(cur);
  if (cur <= 0.0) {
    res.converged = true;
    return res;
  }
  double eta = cfg.eta;
  Mat grad;
  safety_gradient(res.u_ff, sys, obstacle, cfg, grad, opt);
  while (res.iterations < cfg.max_outer_iters) {
    ++res.iterations;
    Mat cand = res.u_ff;
    for (std::size_t i = 0; i < cand.rows(); ++i)
      for (std::size_t j = 0; j < cand.cols(); ++j)
        cand(i, j) -= eta * grad(i, j);
    const double cval = safety_check(cand, sys, obstacle, cfg, opt);
    if (cval < cur) {
      res.u_ff = cand;
      cur = cval;
      res.safety_history.push_back(cur);
      if (cur <= 0.0) {
        res.converged = true;
        break;
      }
      safety_gradient(res.u_ff, sys, obstacle, cfg, grad, opt);
    } else {
      eta *= 0.5;
      if (eta <= 1e-12) break;  // stalled: the descent direction stopped paying
    }
  }
  res.eta_final = eta;
  return res;
}

}  // namespace reachlp
