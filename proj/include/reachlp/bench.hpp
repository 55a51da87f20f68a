// Micro-benchmarks: latency of single LP solves and of the refined
// reachable-tube pipeline.  Wall-clock (monotonic) timing; problem
// generation and any serialization stay outside the timed regions, which
// the event counters below make checkable.
#pragma once

#include <atomic>
#include <cstdint>
#include <string>

#include "reachlp/linalg.hpp"
#include "reachlp/lp_core.hpp"

namespace reachlp {

// Process-wide event counters.  Generators and file writers increment
// them; the bench loops snapshot them around the timed region and record
// the deltas, so a test can assert the deltas are zero.
struct BenchCounters {
  std::atomic<std::uint64_t> problem_generations{0};
  std::atomic<std::uint64_t> serializations{0};
};
BenchCounters& bench_counters();

struct BenchReport {
  std::string name;
  std::size_t sample_size = 0;
  double mean_seconds = 0.0;
  double std_seconds = 0.0;     // sample standard deviation; 0 when N == 1
  double median_seconds = 0.0;
  double warmup_seconds = 0.0;
  // Reach bench: sum of final tube widths over the state coordinates.
  double bound_size = 0.0;
  // True when every repetition reproduced the same auxiliary metric.
  bool aux_consistent = true;
  // Counter deltas observed inside the timed region (expected zero).
  std::uint64_t generations_timed = 0;
  std::uint64_t serializations_timed = 0;
  Vec samples_seconds;  // raw per-repetition wall times
};

// Deterministic random LP: A_ub entries i.i.d. uniform[-1,1]; feasibility
// by construction via b_ub = A_ub x0 + s with x0, s uniform[0,1];
// boundedness via an appended row sum(x) <= 2n; c i.i.d. uniform[-1,1];
// x >= 0 mode.
GeneralLP gen_random_lp(std::size_t n, std::size_t m_ub, std::uint64_t seed);

// Latency of re-solving one generated LP: one untimed warmup solve, then N
// individually timed solves of the identical problem.
BenchReport run_lp_bench(std::size_t n, std::size_t m_ub, std::size_t N,
                         std::uint64_t seed = 2024);

// Throughput variant: N distinct seeded problems solved as one batch over
// `threads` workers (0 = hardware count); reported mean is total wall time
// divided by N.
BenchReport run_lp_batch_bench(std::size_t n, std::size_t m_ub, std::size_t N,
                               std::uint64_t seed = 2024,
                               std::size_t threads = 0);

// Latency of one refined Van der Pol tube integration over [0, t_f] from a
// small box around (1, 0): one untimed warmup, then N timed repetitions.
// dt_request is snapped so t_f is a whole number of steps.
BenchReport run_reach_bench(double mu, double t_f, std::size_t N,
                            double dt_request = 5e-3, bool refine = true,
                            std::size_t threads = 1);

// One-line, fixed-order row: name, N, mean, std, median, bound size.
std::string bench_table_row(const BenchReport& r);
// Multi-line human-readable summary of the same fields.
std::string bench_summary(const BenchReport& r);

}  // namespace reachlp
