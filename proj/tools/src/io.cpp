#include "sqglab/cli/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace sqglab::cli {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad number \"" + std::string(s) + "\"");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : trajectory.records) {
    for (double v : {r.t, r.l2sq, r.h12sq, r.gradsq, r.linf, r.inject, r.residual}) {
      out += format_double(v);
      out += ',';
    }
    if (r.delta) out += format_double(*r.delta);
    out += ',';
    if (r.mu) out += format_double(*r.mu);
    out += '\n';
  }
  return out;
}

void write_trajectory_csv(const std::string& path, const Trajectory& trajectory) {
  write_text(path, trajectory_csv(trajectory));
}

std::vector<TrajectoryRecord> read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error(path + ": missing or unexpected header");
  std::vector<TrajectoryRecord> out;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 9) throw std::runtime_error("csv line " + std::to_string(n) + ": expected 9 fields");
    TrajectoryRecord r;
    r.t = parse_double(f[0], n);
    r.l2sq = parse_double(f[1], n);
    r.h12sq = parse_double(f[2], n);
    r.gradsq = parse_double(f[3], n);
    r.linf = parse_double(f[4], n);
    r.inject = parse_double(f[5], n);
    r.residual = parse_double(f[6], n);
    if (!f[7].empty()) r.delta = parse_double(f[7], n);
    if (!f[8].empty()) r.mu = parse_double(f[8], n);
    out.push_back(r);
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sqglab::cli
