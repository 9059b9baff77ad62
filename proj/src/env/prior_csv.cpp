#include "tbandit/env/prior_csv.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbandit/harness/csv.hpp"

namespace tbandit::env {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

void write_prior_csv(std::ostream& os, const PriorDataset& data) {
  const std::size_t dz = data.dim_z();
  const std::size_t dw = data.dim_w();
  for (std::size_t i = 0; i < dz; ++i) os << "z_" << i << ',';
  for (std::size_t i = 0; i < dw; ++i) os << "w_" << i << ',';
  os << "x,y\n";
  for (const PriorSample& s : data) {
    for (double v : s.z) os << harness::format_real(v) << ',';
    for (double v : s.w) os << harness::format_real(v) << ',';
    os << s.x << ',' << harness::format_real(s.y) << '\n';
  }
}

PriorDataset read_prior_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("prior csv: missing header");
  const std::vector<std::string> header = split(line);
  std::size_t dz = 0, dw = 0;
  for (const std::string& h : header) {
    if (h.rfind("z_", 0) == 0) ++dz;
    else if (h.rfind("w_", 0) == 0) ++dw;
  }
  if (header.size() != dz + dw + 2 || header[dz + dw] != "x" || header[dz + dw + 1] != "y") {
    throw std::runtime_error("prior csv: malformed header");
  }
  PriorDataset data("csv");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line);
    if (f.size() != header.size()) throw std::runtime_error("prior csv: wrong field count");
    PriorSample s;
    for (std::size_t i = 0; i < dz; ++i) s.z.push_back(std::stod(f[i]));
    for (std::size_t i = 0; i < dw; ++i) s.w.push_back(std::stod(f[dz + i]));
    s.x = static_cast<Arm>(std::stoul(f[dz + dw]));
    s.y = std::stod(f[dz + dw + 1]);
    data.push_back(std::move(s));
  }
  return data;
}

}  // namespace tbandit::env
