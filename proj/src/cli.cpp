#include "reachlp/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "json.hpp"
#include "reachlp/bench.hpp"
#include "reachlp/errors.hpp"
#include "reachlp/io.hpp"
#include "reachlp/scenarios.hpp"
#include "reachlp/simplex.hpp"

namespace reachlp {

namespace {

int status_exit_code(const SolveStatus& st) {
  if (st.success) return 0;
  if (!st.feasible) return 2;
  if (!st.bounded) return 3;
  return 5;  // iteration cap
}

void write_json_file(const std::string& path, const nlohmann::json& doc) {
  // Route through the counted writer so summaries register as
  // serialization events like every other output.
  std::string text = doc.dump(2) + "\n";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError(path + ":1: cannot open file for writing");
  out << text;
  bench_counters().serializations.fetch_add(1);
}

}  // namespace

int cmd_solve(const std::string& path, const std::string& out_path) {
  GeneralLP lp;
  try {
    lp = read_lp_file(path);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  }
  const SolveOutcome out = linprog(lp);
  const std::string dest =
      out_path.empty() ? path + ".solution.json" : out_path;
  write_solution_file(dest, out);
  std::printf("status: %s  fun: %.17g  iterations: %zu  -> %s\n",
              out.status.success
                  ? "success"
                  : (!out.status.feasible
                         ? "infeasible"
                         : (!out.status.bounded ? "unbounded" : "cap")),
              out.fun, out.status.iterations, dest.c_str());
  return status_exit_code(out.status);
}

int cmd_vdp(const CliOptions& opt) {
  const double tf = opt.tf.value_or(2.0 * std::numbers::pi);
  const double dt = snap_time_step(tf, opt.dt);
  LiftedSystem sys = vanderpol_scenario(opt.mu);
  ReachOptions ropt;
  ropt.refine = !opt.no_refine;
  ropt.threads = opt.parallel ? 0 : 1;

  const IntervalVector y0 = sys.lift_initial();
  EmbeddingState s0;
  for (const Interval& yi : y0) {
    s0.y_lo.push_back(yi.lo);
    s0.y_hi.push_back(yi.hi);
  }
  const EmbeddingTrajectory traj = integrate_embedding(sys, s0, dt, tf, ropt);

  double bound_size = 0.0;
  for (std::size_t i = 0; i < sys.state_dim(); ++i)
    bound_size += traj.states.back().y_hi[i] - traj.states.back().y_lo[i];

  const std::string prefix = opt.out.empty() ? "vdp" : opt.out;
  write_trajectory_csv(prefix + ".csv", traj);
  write_tube_svg(prefix + ".svg", traj, 0, 1);
  nlohmann::json summary;
  summary["mu"] = opt.mu;
  summary["tf"] = tf;
  summary["dt"] = dt;
  summary["steps"] = traj.states.size() - 1;
  summary["refined"] = !opt.no_refine;
  summary["final_bound_size"] = bound_size;
  summary["refine_fallbacks"] = traj.refine_fallbacks;
  summary["order_violated"] = traj.order_violated;
  write_json_file(prefix + ".summary.json", summary);
  std::printf("vdp: %zu steps, final bound size %.17g -> %s.{csv,svg,summary.json}\n",
              traj.states.size() - 1, bound_size, prefix.c_str());
  return 0;
}

int cmd_bicycle_nudge(const CliOptions& opt) {
  const double tf = opt.tf.value_or(1.0);
  const double dt = snap_time_step(tf, opt.dt);
  const std::size_t steps =
      static_cast<std::size_t>(std::llround(tf / dt));
  LiftedSystem sys = bicycle_scenario();
  const ObstacleSpec obstacle = bicycle_obstacle();
  const Mat u0 = bicycle_nominal_input(steps, dt);
  NudgeConfig cfg;
  cfg.eta = opt.eta;
  cfg.max_outer_iters = opt.max_iters;
  cfg.dt = dt;
  cfg.horizon = tf;
  ReachOptions ropt;
  ropt.refine = !opt.no_refine;
  ropt.threads = opt.parallel ? 0 : 1;

  const NudgeResult res = nudge(u0, sys, obstacle, cfg, ropt);
  const SafetyEvaluation final_eval =
      safety_check_detailed(res.u_ff, sys, obstacle, cfg, ropt);

  const std::string prefix = opt.out.empty() ? "bicycle_nudge" : opt.out;
  write_trajectory_csv(prefix + ".csv", final_eval.trajectory,
                       &final_eval.per_step_bound);
  write_tube_svg(prefix + ".svg", final_eval.trajectory, 0, 1, &obstacle);
  write_matrix_csv(prefix + "_u_ff.csv", res.u_ff, "u");
  Mat history(res.safety_history.size(), 1);
  for (std::size_t i = 0; i < res.safety_history.size(); ++i)
    history(i, 0) = res.safety_history[i];
  write_matrix_csv(prefix + "_safety.csv", history, "safety_value");
  nlohmann::json summary;
  summary["tf"] = tf;
  summary["dt"] = dt;
  summary["steps"] = steps;
  summary["eta"] = opt.eta;
  summary["eta_final"] = res.eta_final;
  summary["iterations"] = res.iterations;
  summary["converged"] = res.converged;
  summary["safety_initial"] = res.safety_history.front();
  summary["safety_final"] = res.safety_history.back();
  write_json_file(prefix + ".summary.json", summary);
  std::printf(
      "bicycle-nudge: %s after %zu iterations, safety %.17g -> %.17g -> "
      "%s.{csv,svg,summary.json}\n",
      res.converged ? "converged" : "NOT converged", res.iterations,
      res.safety_history.front(), res.safety_history.back(), prefix.c_str());
  return res.converged ? 0 : 4;
}

int cmd_bench(const std::string& kind, const CliOptions& opt) {
  if (kind == "lp") {
    const std::size_t N = opt.samples ? opt.samples : 100;
    const BenchReport r = run_lp_bench(opt.lp_n, opt.lp_m, N, opt.seed);
    std::printf("%s\n", bench_table_row(r).c_str());
    const std::string dest = opt.out.empty() ? "bench_lp.json" : opt.out;
    write_bench_report(dest, r);
    if (opt.parallel) {
      const BenchReport rb =
          run_lp_batch_bench(opt.lp_n, opt.lp_m, N, opt.seed, 0);
      std::printf("%s\n", bench_table_row(rb).c_str());
      write_bench_report(dest + ".batch.json", rb);
    }
    return 0;
  }
  if (kind == "reach") {
    const std::size_t N = opt.samples ? opt.samples : 10;
    const double tf = opt.tf.value_or(0.628);
    const BenchReport r = run_reach_bench(opt.mu, tf, N, opt.dt,
                                          !opt.no_refine,
                                          opt.parallel ? 0 : 1);
    std::printf("%s\n", bench_table_row(r).c_str());
    const std::string dest = opt.out.empty() ? "bench_reach.json" : opt.out;
    write_bench_report(dest, r);
    return 0;
  }
  std::fprintf(stderr, "unknown bench kind '%s' (use lp or reach)\n",
               kind.c_str());
  return 1;
}

}  // namespace reachlp
