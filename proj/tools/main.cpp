#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "reachlp/cli.hpp"
#include "reachlp/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "reachlp: tableau LP solver with forward-mode derivatives and "
      "LP-refined reachable tubes"};
  app.require_subcommand(1);

  reachlp::CliOptions opt;
  std::string lp_path;
  std::string out_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", opt.out, "output path prefix");
    cmd->add_option("--seed", opt.seed, "random seed");
    cmd->add_option("--samples", opt.samples, "benchmark sample size");
    cmd->add_option("--dt", opt.dt, "integration step request");
    cmd->add_option("--tf", opt.tf, "time horizon");
    cmd->add_option("--eta", opt.eta, "descent step size");
    cmd->add_option("--max-iters", opt.max_iters, "descent iteration budget");
    cmd->add_flag("--no-refine", opt.no_refine, "skip LP refinement");
    cmd->add_flag("--parallel", opt.parallel, "use the batch-parallel path");
    cmd->add_option("--n", opt.lp_n, "LP bench: variable count");
    cmd->add_option("--m", opt.lp_m, "LP bench: inequality count");
    cmd->add_option("--mu", opt.mu, "oscillator stiffness");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve an LP document");
  solve->add_option("file", lp_path, "LP JSON file")->required();
  solve->add_option("--out", out_path, "solution output path");

  CLI::App* vdp =
      app.add_subcommand("vdp", "Van der Pol reachable tube demo");
  add_common(vdp);
  CLI::App* bike = app.add_subcommand(
      "bicycle-nudge", "bicycle obstacle-avoidance input nudging demo");
  add_common(bike);
  CLI::App* bench_lp =
      app.add_subcommand("bench-lp", "random LP solve latency benchmark");
  add_common(bench_lp);
  CLI::App* bench_reach = app.add_subcommand(
      "bench-reach", "refined reachable tube latency benchmark");
  add_common(bench_reach);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return reachlp::cmd_solve(lp_path, out_path);
    if (vdp->parsed()) return reachlp::cmd_vdp(opt);
    if (bike->parsed()) return reachlp::cmd_bicycle_nudge(opt);
    if (bench_lp->parsed()) return reachlp::cmd_bench("lp", opt);
    if (bench_reach->parsed()) return reachlp::cmd_bench("reach", opt);
  } catch (const reachlp::ParseError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
