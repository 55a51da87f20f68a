// File formats for the command-line tools: LP problem documents (JSON),
// solution documents (JSON), trajectory tables (CSV), tube plots (SVG) and
// benchmark reports (JSON).  All numeric output is round-trip exact: reading
// a file back reproduces the in-memory doubles bit for bit.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "reachlp/bench.hpp"
#include "reachlp/lp_core.hpp"
#include "reachlp/reach.hpp"
#include "reachlp/simplex.hpp"

namespace reachlp {

// LP document fields: c (required), A_ub, b_ub, A_eq, b_eq, unbounded.
// Parse failures throw ParseError with "<origin>:<line>: <message>".
GeneralLP parse_lp_json(const std::string& text, const std::string& origin);
GeneralLP read_lp_file(const std::string& path);
void write_lp_file(const std::string& path, const GeneralLP& lp);

struct SolutionDoc {
  SolveStatus status;
  Vec x;
  double fun = 0.0;
  std::vector<std::size_t> basis;
};
void write_solution_file(const std::string& path, const SolveOutcome& out);
SolutionDoc read_solution_file(const std::string& path);

// CSV with one record per step: t, every y_lo component, every y_hi
// component, and optionally the obstacle bound.
struct TrajectoryDoc {
  Vec times;
  std::vector<EmbeddingState> states;
  Vec obstacle_bound;  // empty when the file has no bound column
};
void write_trajectory_csv(const std::string& path,
                          const EmbeddingTrajectory& traj,
                          const Vec* obstacle_bound = nullptr);
TrajectoryDoc read_trajectory_csv(const std::string& path);

// Generic numeric table (used for input schedules and safety histories).
void write_matrix_csv(const std::string& path, const Mat& m,
                      const std::string& column_prefix);
Mat read_matrix_csv(const std::string& path);

// Self-contained vector plot of the tube projected onto two lifted
// coordinates, with the obstacle disc when given.
void write_tube_svg(const std::string& path, const EmbeddingTrajectory& traj,
                    std::size_t coord_x, std::size_t coord_y,
                    const ObstacleSpec* obstacle = nullptr);

void write_bench_report(const std::string& path, const BenchReport& r);
BenchReport read_bench_report(const std::string& path);

}  // namespace reachlp
