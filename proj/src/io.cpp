#include "reachlp/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "reachlp/errors.hpp"

namespace reachlp {

namespace {

using nlohmann::json;

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  const std::size_t end = std::min(byte, text.size());
  for (std::size_t i = 0; i < end; ++i)
    if (text[i] == '\n') ++line;
  return line;
}

[[noreturn]] void fail(const std::string& origin, std::size_t line,
                       const std::string& message) {
  throw ParseError(origin + ":" + std::to_string(line) + ": " + message);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ":1: cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError(path + ":1: cannot open file for writing");
  out << text;
  if (!out) throw ParseError(path + ":1: short write");
  bench_counters().serializations.fetch_add(1);
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin, line_of_byte(text, e.byte), e.what());
  }
}

Vec as_vector(const json& j, const std::string& origin,
              const std::string& field) {
  if (!j.is_array()) fail(origin, 1, "field '" + field + "' must be an array");
  Vec v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number())
      fail(origin, 1, "field '" + field + "' must hold numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

Mat as_matrix(const json& j, const std::string& origin,
              const std::string& field) {
  if (!j.is_array())
    fail(origin, 1, "field '" + field + "' must be an array of rows");
  if (j.empty()) return Mat();
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  Mat m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != cols)
      fail(origin, 1, "field '" + field + "' rows must have equal length");
    for (std::size_t k = 0; k < cols; ++k) {
      if (!row[k].is_number())
        fail(origin, 1, "field '" + field + "' must hold numbers");
      m(i, k) = row[k].get<double>();
    }
  }
  return m;
}

json matrix_json(const Mat& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

// %.17g: the shortest fixed format guaranteed to round-trip an IEEE double.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string& token, const std::string& origin,
                    std::size_t line) {
  // std::strtod directly: glibc flags subnormal results with ERANGE, but an
  // underflowed-yet-representable value like 5e-324 must round-trip, so only
  // genuine overflow is an error.
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str()) fail(origin, line, "not a number: '" + token + "'");
  if (errno == ERANGE && (v == HUGE_VAL || v == -HUGE_VAL))
    fail(origin, line, "number out of range: '" + token + "'");
  const char* p = end;
  while (*p == ' ' || *p == '\r' || *p == '\t') ++p;
  if (*p != '\0') fail(origin, line, "trailing junk in number");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

GeneralLP parse_lp_json(const std::string& text, const std::string& origin) {
  const json doc = parse_json(text, origin);
  if (!doc.is_object()) fail(origin, 1, "top level must be an object");
  if (!doc.contains("c")) fail(origin, 1, "missing required field 'c'");
  GeneralLP lp;
  lp.c = as_vector(doc["c"], origin, "c");
  if (doc.contains("A_ub")) lp.A_ub = as_matrix(doc["A_ub"], origin, "A_ub");
  if (doc.contains("b_ub")) lp.b_ub = as_vector(doc["b_ub"], origin, "b_ub");
  if (doc.contains("A_eq")) lp.A_eq = as_matrix(doc["A_eq"], origin, "A_eq");
  if (doc.contains("b_eq")) lp.b_eq = as_vector(doc["b_eq"], origin, "b_eq");
  if (doc.contains("unbounded")) {
    if (!doc["unbounded"].is_boolean())
      fail(origin, 1, "field 'unbounded' must be a boolean");
    lp.unbounded = doc["unbounded"].get<bool>();
  }
  try {
    lp.validate();
  } catch (const DimensionMismatch& e) {
    fail(origin, 1, e.what());
  }
  return lp;
}

GeneralLP read_lp_file(const std::string& path) {
  return parse_lp_json(read_text(path), path);
}

void write_lp_file(const std::string& path, const GeneralLP& lp) {
  json doc;
  doc["c"] = lp.c;
  if (lp.A_ub.rows() > 0) doc["A_ub"] = matrix_json(lp.A_ub);
  if (!lp.b_ub.empty()) doc["b_ub"] = lp.b_ub;
  if (lp.A_eq.rows() > 0) doc["A_eq"] = matrix_json(lp.A_eq);
  if (!lp.b_eq.empty()) doc["b_eq"] = lp.b_eq;
  doc["unbounded"] = lp.unbounded;
  write_text(path, doc.dump(2) + "\n");
}

void write_solution_file(const std::string& path, const SolveOutcome& out) {
  json doc;
  doc["status"] = {{"feasible", out.status.feasible},
                   {"bounded", out.status.bounded},
                   {"success", out.status.success},
                   {"hit_iteration_cap", out.status.hit_iteration_cap},
                   {"iterations", out.status.iterations}};
  doc["x"] = out.x;
  doc["fun"] = out.fun;
  doc["basis"] = out.basis.indices;
  write_text(path, doc.dump(2) + "\n");
}

SolutionDoc read_solution_file(const std::string& path) {
  const std::string text = read_text(path);
  const json doc = parse_json(text, path);
  SolutionDoc s;
  try {
    const auto& st = doc.at("status");
    s.status.feasible = st.at("feasible").get<bool>();
    s.status.bounded = st.at("bounded").get<bool>();
    s.status.success = st.at("success").get<bool>();
    s.status.hit_iteration_cap = st.at("hit_iteration_cap").get<bool>();
    s.status.iterations = st.at("iterations").get<std::size_t>();
    s.x = as_vector(doc.at("x"), path, "x");
    s.fun = doc.at("fun").get<double>();
    for (const auto& b : doc.at("basis"))
      s.basis.push_back(b.get<std::size_t>());
  } catch (const json::exception& e) {
    fail(path, 1, e.what());
  }
  return s;
}

void write_trajectory_csv(const std::string& path,
                          const EmbeddingTrajectory& traj,
                          const Vec* obstacle_bound) {
  if (obstacle_bound && obstacle_bound->size() != traj.states.size())
    throw DimensionMismatch("obstacle bound column size vs recorded states");
  std::ostringstream out;
  const std::size_t m = traj.states.empty() ? 0 : traj.states[0].y_lo.size();
  out << "t";
  for (std::size_t i = 0; i < m; ++i) out << ",y_lo_" << i;
  for (std::size_t i = 0; i < m; ++i) out << ",y_hi_" << i;
  if (obstacle_bound) out << ",obstacle_bound";
  out << "\n";
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    out << fmt(traj.times[s]);
    for (std::size_t i = 0; i < m; ++i)
      out << "," << fmt(traj.states[s].y_lo[i]);
    for (std::size_t i = 0; i < m; ++i)
      out << "," << fmt(traj.states[s].y_hi[i]);
    if (obstacle_bound) out << "," << fmt((*obstacle_bound)[s]);
    out << "\n";
  }
  write_text(path, out.str());
}

TrajectoryDoc read_trajectory_csv(const std::string& path) {
  const std::string text = read_text(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(path, 1, "empty trajectory file");
  const auto header = split_csv(line);
  if (header.empty() || header[0] != "t")
    fail(path, 1, "first column must be 't'");
  const bool has_bound =
      !header.empty() && header.back() == "obstacle_bound";
  const std::size_t numeric = header.size() - 1 - (has_bound ? 1 : 0);
  if (numeric % 2 != 0)
    fail(path, 1, "expected matching y_lo_*/y_hi_* column pairs");
  const std::size_t m = numeric / 2;
  TrajectoryDoc doc;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      fail(path, lineno, "wrong number of columns");
    doc.times.push_back(parse_number(cells[0], path, lineno));
    EmbeddingState st;
    for (std::size_t i = 0; i < m; ++i)
      st.y_lo.push_back(parse_number(cells[1 + i], path, lineno));
    for (std::size_t i = 0; i < m; ++i)
      st.y_hi.push_back(parse_number(cells[1 + m + i], path, lineno));
    doc.states.push_back(std::move(st));
    if (has_bound)
      doc.obstacle_bound.push_back(
          parse_number(cells[1 + 2 * m], path, lineno));
  }
  return doc;
}

void write_matrix_csv(const std::string& path, const Mat& m,
                      const std::string& column_prefix) {
  std::ostringstream out;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (j) out << ",";
    out << column_prefix << j;
  }
  out << "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      out << fmt(m(i, j));
    }
    out << "\n";
  }
  write_text(path, out.str());
}

Mat read_matrix_csv(const std::string& path) {
  const std::string text = read_text(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(path, 1, "empty table file");
  const std::size_t cols = split_csv(line).size();
  std::vector<Vec> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != cols) fail(path, lineno, "wrong number of columns");
    Vec row;
    row.reserve(cols);
    for (const auto& c : cells) row.push_back(parse_number(c, path, lineno));
    rows.push_back(std::move(row));
  }
  Mat m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  return m;
}

void write_tube_svg(const std::string& path, const EmbeddingTrajectory& traj,
                    std::size_t coord_x, std::size_t coord_y,
                    const ObstacleSpec* obstacle) {
  if (traj.states.empty()) throw DimensionMismatch("empty trajectory");
  const std::size_t m = traj.states[0].y_lo.size();
  if (coord_x >= m || coord_y >= m)
    throw DimensionMismatch("projection coordinates out of range");
  double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
  for (const auto& st : traj.states) {
    min_x = std::min(min_x, st.y_lo[coord_x]);
    max_x = std::max(max_x, st.y_hi[coord_x]);
    min_y = std::min(min_y, st.y_lo[coord_y]);
    max_y = std::max(max_y, st.y_hi[coord_y]);
  }
  if (obstacle && obstacle->center.size() >= 2) {
    min_x = std::min(min_x, obstacle->center[0] - obstacle->radius);
    max_x = std::max(max_x, obstacle->center[0] + obstacle->radius);
    min_y = std::min(min_y, obstacle->center[1] - obstacle->radius);
    max_y = std::max(max_y, obstacle->center[1] + obstacle->radius);
  }
  const double span_x = std::max(max_x - min_x, 1e-9);
  const double span_y = std::max(max_y - min_y, 1e-9);
  const double pad_x = 0.05 * span_x;
  const double pad_y = 0.05 * span_y;
  min_x -= pad_x;
  max_x += pad_x;
  min_y -= pad_y;
  max_y += pad_y;
  const double w = 640.0;
  const double h = 640.0 * (max_y - min_y) / (max_x - min_x);
  auto sx = [&](double v) { return (v - min_x) / (max_x - min_x) * w; };
  // SVG y grows downward; flip so the plot reads like a standard plane.
  auto sy = [&](double v) { return h - (v - min_y) / (max_y - min_y) * h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << w
      << " " << h << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h
      << "\" fill=\"white\" stroke=\"#444\"/>\n";
  if (obstacle && obstacle->center.size() >= 2) {
    out << "<circle cx=\"" << sx(obstacle->center[0]) << "\" cy=\""
        << sy(obstacle->center[1]) << "\" r=\""
        << obstacle->radius / (max_x - min_x) * w
        << "\" fill=\"#d9534f\" fill-opacity=\"0.25\" stroke=\"#d9534f\"/>\n";
  }
  const std::size_t stride = std::max<std::size_t>(1, traj.states.size() / 240);
  for (std::size_t s = 0; s < traj.states.size(); s += stride) {
    const auto& st = traj.states[s];
    const double x0 = sx(st.y_lo[coord_x]);
    const double x1 = sx(st.y_hi[coord_x]);
    const double y0 = sy(st.y_hi[coord_y]);
    const double y1 = sy(st.y_lo[coord_y]);
    out << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\""
        << std::max(x1 - x0, 0.5) << "\" height=\"" << std::max(y1 - y0, 0.5)
        << "\" fill=\"#2a6f97\" fill-opacity=\"0.10\" stroke=\"#2a6f97\" "
           "stroke-opacity=\"0.6\" stroke-width=\"0.6\"/>\n";
  }
  out << "</svg>\n";
  write_text(path, out.str());
}

void write_bench_report(const std::string& path, const BenchReport& r) {
  json doc;
  doc["name"] = r.name;
  doc["sample_size"] = r.sample_size;
  doc["mean_seconds"] = r.mean_seconds;
  doc["std_seconds"] = r.std_seconds;
  doc["median_seconds"] = r.median_seconds;
  doc["warmup_seconds"] = r.warmup_seconds;
  doc["bound_size"] = r.bound_size;
  doc["aux_consistent"] = r.aux_consistent;
  doc["generations_timed"] = r.generations_timed;
  doc["serializations_timed"] = r.serializations_timed;
  doc["samples_seconds"] = r.samples_seconds;
  write_text(path, doc.dump(2) + "\n");
}

BenchReport read_bench_report(const std::string& path) {
  const std::string text = read_text(path);
  const json doc = parse_json(text, path);
  BenchReport r;
  try {
    r.name = doc.at("name").get<std::string>();
    r.sample_size = doc.at("sample_size").get<std::size_t>();
    r.mean_seconds = doc.at("mean_seconds").get<double>();
    r.std_seconds = doc.at("std_seconds").get<double>();
    r.median_seconds = doc.at("median_seconds").get<double>();
    r.warmup_seconds = doc.at("warmup_seconds").get<double>();
    r.bound_size = doc.at("bound_size").get<double>();
    r.aux_consistent = doc.at("aux_consistent").get<bool>();
    r.generations_timed = doc.at("generations_timed").get<std::uint64_t>();
    r.serializations_timed =
        doc.at("serializations_timed").get<std::uint64_t>();
    r.samples_seconds = as_vector(doc.at("samples_seconds"), path,
                                  "samples_seconds");
  } catch (const json::exception& e) {
    fail(path, 1, e.what());
  }
  return r;
}

}  // namespace reachlp
