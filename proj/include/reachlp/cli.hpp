// Command implementations behind the command-line tool.  Each returns a
// process exit code: 0 success, 1 parse/usage error, 2 infeasible,
// 3 unbounded, 4 descent did not converge, 5 iteration cap.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace reachlp {

struct CliOptions {
  std::string out;  // output path or prefix; commands have defaults
  std::uint64_t seed = 2024;
  std::size_t samples = 0;  // 0 = per-command default
  double dt = 5e-3;
  std::optional<double> tf;
  double eta = 0.05;
  std::size_t max_iters = 100;
  bool no_refine = false;
  bool parallel = false;
  // Workload shape for the LP bench and the oscillator stiffness.
  std::size_t lp_n = 20;
  std::size_t lp_m = 15;
  double mu = 1.0;
};

int cmd_solve(const std::string& path, const std::string& out_path);
int cmd_vdp(const CliOptions& opt);
int cmd_bicycle_nudge(const CliOptions& opt);
int cmd_bench(const std::string& kind, const CliOptions& opt);

}  // namespace reachlp
