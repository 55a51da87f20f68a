#include "reachlp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "reachlp/errors.hpp"
#include "reachlp/reach.hpp"
#include "reachlp/scenarios.hpp"
#include "reachlp/simplex.hpp"

namespace reachlp {

BenchCounters& bench_counters() {
  static BenchCounters counters;
  return counters;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Uniform [0,1) built from the top 53 bits of the engine output; the
// distribution adapters in <random> are not bit-stable across library
// versions, and the generator contract is deterministic per seed.
double unit(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

double symmetric(std::mt19937_64& g) { return 2.0 * unit(g) - 1.0; }

void summarize(BenchReport& r) {
  const std::size_t n = r.samples_seconds.size();
  r.sample_size = n;
  if (n == 0) return;
  double sum = 0.0;
  for (double s : r.samples_seconds) sum += s;
  r.mean_seconds = sum / n;
  if (n > 1) {
    double acc = 0.0;
    for (double s : r.samples_seconds) {
      const double d = s - r.mean_seconds;
      acc += d * d;
    }
    r.std_seconds = std::sqrt(acc / (n - 1));
  } else {
    r.std_seconds = 0.0;
  }
  Vec sorted = r.samples_seconds;
  std::sort(sorted.begin(), sorted.end());
  r.median_seconds = n % 2 == 1
                         ? sorted[n / 2]
                         : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

struct CounterSnapshot {
  std::uint64_t gen;
  std::uint64_t ser;
};

CounterSnapshot snapshot() {
  return {bench_counters().problem_generations.load(),
          bench_counters().serializations.load()};
}

void record_deltas(BenchReport& r, CounterSnapshot before) {
  const CounterSnapshot after = snapshot();
  r.generations_timed += after.gen - before.gen;
  r.serializations_timed += after.ser - before.ser;
}

}  // namespace

GeneralLP gen_random_lp(std::size_t n, std::size_t m_ub, std::uint64_t seed) {
  if (n < 1 || m_ub < 1)
    throw DimensionMismatch("random LP needs n >= 1 and m_ub >= 1");
  std::mt19937_64 rng(seed);
  GeneralLP lp;
  lp.A_ub = Mat(m_ub + 1, n);
  for (std::size_t i = 0; i < m_ub; ++i)
    for (std::size_t j = 0; j < n; ++j) lp.A_ub(i, j) = symmetric(rng);
  Vec x0(n), slack(m_ub);
  for (double& v : x0) v = unit(rng);
  for (double& v : slack) v = unit(rng);
  lp.b_ub.assign(m_ub + 1, 0.0);
  for (std::size_t i = 0; i < m_ub; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += lp.A_ub(i, j) * x0[j];
    lp.b_ub[i] = acc + slack[i];
  }
  for (std::size_t j = 0; j < n; ++j) lp.A_ub(m_ub, j) = 1.0;
  lp.b_ub[m_ub] = 2.0 * static_cast<double>(n);
  lp.c.resize(n);
  for (double& v : lp.c) v = symmetric(rng);
  lp.unbounded = false;
  bench_counters().problem_generations.fetch_add(1);
  return lp;
}

BenchReport run_lp_bench(std::size_t n, std::size_t m_ub, std::size_t N,
                         std::uint64_t seed) {
  if (N < 1) throw DimensionMismatch("sample size must be at least 1");
  BenchReport r;
  char name[64];
  std::snprintf(name, sizeof name, "lp n=%zu m=%zu", n, m_ub);
  r.name = name;
  const GeneralLP lp = gen_random_lp(n, m_ub, seed);
  const SimplexConfig cfg;

  auto t0 = Clock::now();
  SolveOutcome warm = linprog(lp, cfg);
  r.warmup_seconds = seconds_since(t0);
  if (!warm.status.success)
    throw Error("benchmark workload unexpectedly failed to solve");

  r.samples_seconds.reserve(N);
  for (std::size_t i = 0; i < N; ++i) {
    const CounterSnapshot before = snapshot();
    t0 = Clock::now();
    SolveOutcome out = linprog(lp, cfg);
    const double dt = seconds_since(t0);
    record_deltas(r, before);
    r.samples_seconds.push_back(dt);
    if (out.fun != warm.fun) r.aux_consistent = false;
  }
  summarize(r);
  return r;
}

BenchReport run_lp_batch_bench(std::size_t n, std::size_t m_ub, std::size_t N,
                               std::uint64_t seed, std::size_t threads) {
  if (N < 1) throw DimensionMismatch("sample size must be at least 1");
  BenchReport r;
  char name[64];
  std::snprintf(name, sizeof name, "lp-batch n=%zu m=%zu", n, m_ub);
  r.name = name;
  std::vector<GeneralLP> problems;
  problems.reserve(N);
  for (std::size_t i = 0; i < N; ++i)
    problems.push_back(gen_random_lp(n, m_ub, seed + i));
  const SimplexConfig cfg;

  auto t0 = Clock::now();
  auto warm = solve_batch(problems, cfg, threads);
  r.warmup_seconds = seconds_since(t0);

  const CounterSnapshot before = snapshot();
  t0 = Clock::now();
  auto outs = solve_batch(problems, cfg, threads);
  const double total = seconds_since(t0);
  record_deltas(r, before);

  for (std::size_t i = 0; i < N; ++i)
    if (outs[i].fun != warm[i].fun) r.aux_consistent = false;
  r.samples_seconds.assign(1, total);
  summarize(r);
  // Report per-problem throughput over the batch, not the single wall time.
  r.sample_size = N;
  r.mean_seconds = total / static_cast<double>(N);
  r.median_seconds = r.mean_seconds;
  r.std_seconds = 0.0;
  return r;
}

BenchReport run_reach_bench(double mu, double t_f, std::size_t N,
                            double dt_request, bool refine,
                            std::size_t threads) {
  if (N < 1) throw DimensionMismatch("sample size must be at least 1");
  BenchReport r;
  char name[64];
  std::snprintf(name, sizeof name, "reach mu=%g tf=%g%s", mu, t_f,
                refine ? "" : " unrefined");
  r.name = name;

  LiftedSystem sys = vanderpol_scenario(mu);
  // Benchmark box: a small neighborhood of (1, 0) so the workload is
  // dominated by the refinement LPs rather than tube blow-up.
  sys.x0_box = make_box({0.99, -0.01}, {1.01, 0.01});
  bench_counters().problem_generations.fetch_add(1);
  const double dt = snap_time_step(t_f, dt_request);
  ReachOptions opt;
  opt.refine = refine;
  opt.threads = threads;
  const IntervalVector y0 = sys.lift_initial();
  EmbeddingState s0;
  for (const Interval& yi : y0) {
    s0.y_lo.push_back(yi.lo);
    s0.y_hi.push_back(yi.hi);
  }
  const std::size_t n = sys.state_dim();

  auto bound_size = [&](const EmbeddingTrajectory& traj) {
    const EmbeddingState& last = traj.states.back();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += last.y_hi[i] - last.y_lo[i];
    return acc;
  };

  auto t0 = Clock::now();
  EmbeddingTrajectory warm = integrate_embedding(sys, s0, dt, t_f, opt);
  r.warmup_seconds = seconds_since(t0);
  r.bound_size = bound_size(warm);

  r.samples_seconds.reserve(N);
  for (std::size_t i = 0; i < N; ++i) {
    const CounterSnapshot before = snapshot();
    t0 = Clock::now();
    EmbeddingTrajectory traj = integrate_embedding(sys, s0, dt, t_f, opt);
    const double dt_wall = seconds_since(t0);
    record_deltas(r, before);
    r.samples_seconds.push_back(dt_wall);
    if (bound_size(traj) != r.bound_size) r.aux_consistent = false;
  }
  summarize(r);
  return r;
}

std::string bench_table_row(const BenchReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-28s N=%-4zu %.6e %.6e %.6e %.6e",
                r.name.c_str(), r.sample_size, r.mean_seconds, r.std_seconds,
                r.median_seconds, r.bound_size);
  return buf;
}

std::string bench_summary(const BenchReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "name: %s\n"
                "sample_size: %zu\n"
                "mean_seconds: %.17g\n"
                "std_seconds: %.17g\n"
                "median_seconds: %.17g\n"
                "warmup_seconds: %.17g\n"
                "bound_size: %.17g\n"
                "aux_consistent: %d\n"
                "generations_timed: %llu\n"
                "serializations_timed: %llu\n",
                r.name.c_str(), r.sample_size, r.mean_seconds, r.std_seconds,
                r.median_seconds, r.warmup_seconds, r.bound_size,
                r.aux_consistent ? 1 : 0,
                static_cast<unsigned long long>(r.generations_timed),
                static_cast<unsigned long long>(r.serializations_timed));
  return buf;
}

}  // namespace reachlp
