// Copyright 2026 The cmseq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cmseq/io.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cmseq/errors.h"

namespace cmseq {
namespace {

using json = nlohmann::json;

std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  std::ostringstream s;
  s << "line " << line << ", column " << col;
  return s.str();
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::ostringstream msg;
    msg << what << ": malformed JSON at " << location(text, e.byte) << ": "
        << e.what();
    throw ParseError(msg.str());
  }
}

const json& field(const json& obj, const char* name, const char* what) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw ParseError(std::string(what) + ": missing field \"" + name + "\"");
  }
  return obj.at(name);
}

int int_field(const json& obj, const char* name, const char* what) {
  const json& v = field(obj, name, what);
  if (!v.is_number_integer()) {
    throw ParseError(std::string(what) + ": field \"" + name +
                     "\" must be an integer");
  }
  return v.get<int>();
}

std::vector<double> numbers(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ParseError(where + ": expected an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) {
      std::ostringstream msg;
      msg << where << "[" << i << "]: expected a number";
      throw ParseError(msg.str());
    }
    out.push_back(arr[i].get<double>());
  }
  return out;
}

Matrix square_block(const json& arr, int d, const std::string& where) {
  std::vector<double> v = numbers(arr, where);
  if (v.size() != static_cast<std::size_t>(d) * static_cast<std::size_t>(d)) {
    std::ostringstream msg;
    msg << where << ": expected " << d * d << " entries, got " << v.size();
    throw ParseError(msg.str());
  }
  Matrix m(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      m(r, c) = v[static_cast<std::size_t>(r * d + c)];
    }
  }
  return m;
}

// Reads {"k": block, ...} into blocks[k]. Rejects keys outside [0, horizon].
void read_blocks(const json& obj, const char* name, int horizon, int d,
                 std::vector<Matrix>& blocks, std::vector<bool>* seen) {
  if (!obj.is_object()) {
    throw ParseError(std::string("model: \"") + name + "\" must be an object");
  }
  for (const auto& [key, value] : obj.items()) {
    int k = -1;
    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), k);
    if (ec != std::errc() || ptr != key.data() + key.size() || k < 0 ||
        k > horizon) {
      throw ParseError(std::string("model: ") + name + " has invalid time key \"" +
                       key + "\"");
    }
    blocks[static_cast<std::size_t>(k)] =
        square_block(value, d, std::string("model: ") + name + "[" + key + "]");
    if (seen) (*seen)[static_cast<std::size_t>(k)] = true;
  }
}

void write_block(std::ostream& out, const Matrix& m) {
  out << "[";
  bool first = true;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out << (first ? "" : ", ") << format_double(m(r, c));
      first = false;
    }
  }
  out << "]";
}

void write_block_map(std::ostream& out, const char* name,
                     const std::vector<Matrix>& blocks,
                     const std::vector<int>& times, bool last) {
  out << "  \"" << name << "\": {";
  for (std::size_t i = 0; i < times.size(); ++i) {
    out << (i ? ",\n" : "\n") << "    \"" << times[i] << "\": ";
    write_block(out, blocks[static_cast<std::size_t>(times[i])]);
  }
  out << (times.empty() ? "}" : "\n  }") << (last ? "\n" : ",\n");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, ptr);
  // "-0" would come back from a JSON reader as the integer 0.
  if (s == "-0") s = "-0.0";
  return s;
}

std::string serialize_model(const CmModel& m) {
  validate(m);
  std::vector<int> tr, cp, all;
  for (int k = 0; k <= m.horizon; ++k) {
    if (m.uses_transition(k)) tr.push_back(k);
    if (m.uses_coupling(k)) cp.push_back(k);
    all.push_back(k);
  }
  std::ostringstream out;
  out << "{\n  \"N\": " << m.horizon << ",\n  \"d\": " << m.dim
      << ",\n  \"c\": \"" << to_string(m.direction) << "\",\n";
  write_block_map(out, "transition", m.transition, tr, false);
  write_block_map(out, "coupling", m.coupling, cp, false);
  write_block_map(out, "noise_cov", m.noise_cov, all, true);
  out << "}\n";
  return out.str();
}

CmModel parse_model(std::string_view text) {
  const json j = parse_json(text, "model");
  const int n = int_field(j, "N", "model");
  const int d = int_field(j, "d", "model");
  if (n < 1 || d < 1) {
    std::ostringstream msg;
    msg << "model: need N >= 1 and d >= 1, got N=" << n << ", d=" << d;
    throw ValidationError(msg.str());
  }
  const json& cj = field(j, "c", "model");
  std::optional<Direction> dir =
      cj.is_string() ? parse_direction(cj.get<std::string>()) : std::nullopt;
  if (!dir) throw ParseError("model: \"c\" must be \"first\" or \"last\"");

  bool initial = false;
  if (j.contains("boundary")) {
    const json& b = j.at("boundary");
    if (b == "initial") {
      initial = true;
    } else if (b != "final") {
      throw ParseError("model: \"boundary\" must be \"final\" or \"initial\"");
    }
    if (initial && *dir != Direction::kLast) {
      throw ParseError("model: \"boundary\": \"initial\" requires c = \"last\"");
    }
  }

  CmModel m = CmModel::zeros(n, d, *dir);
  if (j.contains("transition")) {
    read_blocks(j.at("transition"), "transition", n, d, m.transition, nullptr);
  }
  if (j.contains("coupling")) {
    read_blocks(j.at("coupling"), "coupling", n, d, m.coupling, nullptr);
  }
  std::vector<bool> seen(static_cast<std::size_t>(n + 1), false);
  read_blocks(field(j, "noise_cov", "model"), "noise_cov", n, d, m.noise_cov,
              &seen);
  for (int k = 0; k <= n; ++k) {
    if (!seen[static_cast<std::size_t>(k)]) {
      throw ParseError("model: noise_cov[" + std::to_string(k) + "] is missing");
    }
  }
  if (initial) {
    const auto last = static_cast<std::size_t>(n);
    const Matrix gain = m.coupling[last];
    const Matrix q0 = m.noise_cov[0];
    const Matrix qn = m.noise_cov[last];
    m.coupling[last].setZero();
    return with_initial_boundary(std::move(m), gain, q0, qn);
  }
  validate(m);
  return m;
}

std::string serialize_covariance(const BlockCovariance& c) {
  const Matrix& a = c.matrix();
  std::ostringstream out;
  out << "{\n  \"n\": " << c.horizon() << ",\n  \"d\": " << c.dim()
      << ",\n  \"data\": [";
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    out << (r ? ",\n    " : "\n    ");
    for (Eigen::Index col = 0; col < a.cols(); ++col) {
      out << (col ? ", " : "") << format_double(a(r, col));
    }
  }
  out << "\n  ]\n}\n";
  return out.str();
}

BlockCovariance parse_covariance(std::string_view text) {
  const json j = parse_json(text, "covariance");
  const int n = int_field(j, "n", "covariance");
  const int d = int_field(j, "d", "covariance");
  if (n < 0 || d < 1) {
    std::ostringstream msg;
    msg << "covariance: need n >= 0 and d >= 1, got n=" << n << ", d=" << d;
    throw ValidationError(msg.str());
  }
  std::vector<double> v = numbers(field(j, "data", "covariance"), "covariance: data");
  const auto side = static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(d);
  if (v.size() != side * side) {
    std::ostringstream msg;
    msg << "covariance: data must hold " << side * side << " numbers for n=" << n
        << ", d=" << d << ", got " << v.size();
    throw ValidationError(msg.str());
  }
  Matrix a(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side));
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          v[r * side + c];
    }
  }
  return BlockCovariance(n, d, a);
}

void write_trajectories(std::ostream& out, const TrajectoryEnsemble& e) {
  out << "path_id,k";
  for (int i = 1; i <= e.dim; ++i) out << ",x_" << i;
  out << "\n";
  std::string line;
  for (Eigen::Index p = 0; p < e.count(); ++p) {
    for (int k = 0; k <= e.horizon; ++k) {
      line = std::to_string(p) + "," + std::to_string(k);
      for (int i = 0; i < e.dim; ++i) {
        line += ",";
        line += format_double(
            e.paths(p, static_cast<Eigen::Index>(k) * e.dim + i));
      }
      line += "\n";
      out << line;
    }
  }
}

TrajectoryEnsemble read_trajectories(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError("trajectories: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  int dim = 0;
  {
    std::istringstream header(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(header, cell, ',')) cells.push_back(cell);
    if (cells.size() < 3 || cells[0] != "path_id" || cells[1] != "k") {
      throw ParseError("trajectories: line 1: expected header path_id,k,x_1,...");
    }
    dim = static_cast<int>(cells.size()) - 2;
    for (int i = 0; i < dim; ++i) {
      if (cells[static_cast<std::size_t>(i + 2)] != "x_" + std::to_string(i + 1)) {
        throw ParseError("trajectories: line 1: expected column x_" +
                         std::to_string(i + 1));
      }
    }
  }

  auto fail = [&](const std::string& what) {
    throw ParseError("trajectories: line " + std::to_string(line_no) + ": " +
                     what);
  };

  std::vector<std::vector<double>> rows;  // one per path
  int horizon = -1;
  long long current = -1;
  int expected_k = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      cells.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cells.size() != static_cast<std::size_t>(dim + 2)) {
      fail("expected " + std::to_string(dim + 2) + " fields, got " +
           std::to_string(cells.size()));
    }
    long long path = 0;
    int k = 0;
    auto parse_int = [&](std::string_view s, auto& v, const char* name) {
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        fail(std::string("bad ") + name + " \"" + std::string(s) + "\"");
      }
    };
    parse_int(cells[0], path, "path_id");
    parse_int(cells[1], k, "k");
    if (path != current) {
      if (current >= 0 && horizon < 0) horizon = expected_k - 1;
      if (current >= 0 && expected_k - 1 != horizon) {
        fail("path " + std::to_string(current) + " is incomplete");
      }
      if (path != current + 1) fail("path ids must be consecutive from 0");
      current = path;
      expected_k = 0;
      rows.emplace_back();
    }
    if (k != expected_k || (horizon >= 0 && k > horizon)) {
      fail("unexpected time index " + std::to_string(k));
    }
    ++expected_k;
    for (int i = 0; i < dim; ++i) {
      std::string_view s = cells[static_cast<std::size_t>(i + 2)];
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        fail("bad number \"" + std::string(s) + "\"");
      }
      rows.back().push_back(v);
    }
  }
  if (rows.empty()) throw ParseError("trajectories: no data rows");
  if (horizon < 0) horizon = expected_k - 1;
  if (expected_k - 1 != horizon) fail("last path is incomplete");

  TrajectoryEnsemble e;
  e.horizon = horizon;
  e.dim = dim;
  const auto width = static_cast<Eigen::Index>(horizon + 1) * dim;
  e.paths.resize(static_cast<Eigen::Index>(rows.size()), width);
  for (std::size_t p = 0; p < rows.size(); ++p) {
    e.paths.row(static_cast<Eigen::Index>(p)) =
        Eigen::Map<const Eigen::RowVectorXd>(rows[p].data(), width);
  }
  return e;
}

std::string serialize_report(const ClassificationReport& r) {
  nlohmann::ordered_json j;
  j["property"] = r.property;
  j["passed"] = r.passed;
  j["worst_residual"] = r.worst_residual;
  j["normalized_residual"] = r.normalized_residual();
  j["worst_indices"] = r.worst_indices;
  j["rel_tol"] = r.rel_tol;
  j["scale"] = r.scale;
  j["tuples_checked"] = r.tuples_checked;
  return j.dump();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << contents;
  if (!out) throw ParseError("failed writing " + path);
}

}  // namespace cmseq
