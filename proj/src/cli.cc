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

#include "cmseq/cli.h"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmseq/characterize.h"
#include "cmseq/errors.h"
#include "cmseq/fit.h"
#include "cmseq/io.h"
#include "cmseq/model.h"

namespace cmseq {
namespace {

struct Options {
  std::string model;
  std::string cov;
  std::string paths;
  std::string out;
  long long count = 1000;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::string direction = "last";
  std::vector<std::string> windows;
  bool empirical = false;
  bool no_enforce = false;
  unsigned threads = 0;
};

double resolve_tol(const Options& o, double fallback) {
  if (o.tol) return *o.tol;
  if (const char* env = std::getenv("CMSEQ_TOL"); env && *env) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) {
      throw ParseError(std::string("CMSEQ_TOL is not a positive number: ") + env);
    }
    return v;
  }
  return fallback;
}

Direction require_direction(const std::string& text) {
  std::optional<Direction> d = parse_direction(text);
  if (!d) throw ParseError("--direction must be first or last, got " + text);
  return *d;
}

std::pair<int, int> parse_window(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    const int k1 = std::stoi(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(text);
    const std::string tail = text.substr(colon + 1);
    const int k2 = std::stoi(tail, &used);
    if (used != tail.size()) throw std::invalid_argument(text);
    return {k1, k2};
  } catch (const std::logic_error&) {
    throw ParseError("--windows expects k1:k2, got " + text);
  }
}

TrajectoryEnsemble load_paths(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_trajectories(in);
}

void print_report(std::ostream& out, const ClassificationReport& r) {
  out << std::left << std::setw(22) << r.property << (r.passed ? "PASS" : "FAIL")
      << "  residual=" << r.worst_residual
      << "  normalized=" << r.normalized_residual();
  if (!r.worst_indices.empty()) {
    out << "  at (";
    for (std::size_t i = 0; i < r.worst_indices.size(); ++i) {
      out << (i ? "," : "") << r.worst_indices[i];
    }
    out << ")";
  }
  out << "\n";
}

int cmd_generate(const Options& o, std::ostream& out) {
  if (o.model.empty() || o.out.empty()) {
    throw ParseError("generate needs --model and --out");
  }
  if (o.count < 1) throw ValidationError("--count must be >= 1");
  const CmModel m = parse_model(read_file(o.model));
  const TrajectoryEnsemble e = sample(m, o.count, o.seed, o.threads);
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw ParseError("cannot write " + o.out);
  write_trajectories(file, e);
  if (!file) throw ParseError("failed writing " + o.out);

  nlohmann::ordered_json meta;
  meta["count"] = e.count();
  meta["N"] = e.horizon;
  meta["d"] = e.dim;
  meta["seed"] = e.seed;
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << e.model_hash;
  meta["model_hash"] = hash.str();
  write_file(o.out + ".meta.json", meta.dump(2) + "\n");
  out << "wrote " << e.count() << " paths (N=" << e.horizon << ", d=" << e.dim
      << ", seed=" << e.seed << ", model " << hash.str() << ") to " << o.out
      << "\n";
  return kExitOk;
}

int cmd_classify(const Options& o, std::ostream& out) {
  std::optional<BlockCovariance> cov;
  double tol = 0.0;
  if (o.empirical) {
    const std::string& src = o.paths.empty() ? o.cov : o.paths;
    if (src.empty()) throw ParseError("classify --empirical needs --paths");
    cov.emplace(empirical_covariance(load_paths(src)));
    tol = resolve_tol(o, kEmpiricalTol);
  } else {
    if (o.cov.empty()) throw ParseError("classify needs --cov");
    cov.emplace(parse_covariance(read_file(o.cov)));
    tol = resolve_tol(o, kDefaultClassifyTol);
  }
  const BlockCovariance& c = *cov;

  std::vector<ClassificationReport> reports{
      is_markov(c, tol), is_reciprocal(c, tol),
      is_cm(c, Direction::kFirst, tol), is_cm(c, Direction::kLast, tol)};
  const Direction window_dir = require_direction(o.direction);
  for (const std::string& w : o.windows) {
    const auto [k1, k2] = parse_window(w);
    reports.push_back(is_interval_cm(c, k1, k2, window_dir, tol));
  }

  out << "N=" << c.horizon() << " d=" << c.dim() << " tol=" << tol
      << (o.empirical ? " (empirical covariance; verdicts are heuristic)" : "")
      << "\n";
  for (const auto& r : reports) print_report(out, r);

  if (!o.out.empty()) {
    nlohmann::ordered_json j;
    j["n"] = c.horizon();
    j["d"] = c.dim();
    j["tol"] = tol;
    j["empirical"] = o.empirical;
    nlohmann::ordered_json verdicts;
    verdicts["markov"] = nlohmann::ordered_json::parse(serialize_report(reports[0]));
    verdicts["reciprocal"] =
        nlohmann::ordered_json::parse(serialize_report(reports[1]));
    verdicts["cm_first"] =
        nlohmann::ordered_json::parse(serialize_report(reports[2]));
    verdicts["cm_last"] = nlohmann::ordered_json::parse(serialize_report(reports[3]));
    nlohmann::ordered_json windows = nlohmann::ordered_json::array();
    for (std::size_t i = 4; i < reports.size(); ++i) {
      windows.push_back(nlohmann::ordered_json::parse(serialize_report(reports[i])));
    }
    verdicts["windows"] = windows;
    j["verdicts"] = verdicts;
    write_file(o.out, j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_fit(const Options& o, std::ostream& out) {
  if (o.cov.empty() || o.out.empty()) throw ParseError("fit needs --cov and --out");
  const BlockCovariance c = parse_covariance(read_file(o.cov));
  FitOptions fo;
  fo.enforce = !o.no_enforce;
  fo.rel_tol = resolve_tol(o, kDefaultClassifyTol);
  const CmModel m = fit_cm(c, require_direction(o.direction), fo);
  write_file(o.out, serialize_model(m));
  out << "wrote cm_" << to_string(m.direction) << " model (N=" << m.horizon
      << ", d=" << m.dim << ") to " << o.out << "\n";
  return kExitOk;
}

int cmd_covariance(const Options& o, std::ostream& out) {
  if (o.out.empty()) throw ParseError("covariance needs --out");
  std::optional<BlockCovariance> c;
  if (!o.paths.empty()) {
    c.emplace(empirical_covariance(load_paths(o.paths)));
  } else if (!o.model.empty()) {
    c.emplace(covariance_of(parse_model(read_file(o.model))));
  } else {
    throw ParseError("covariance needs --model or --paths");
  }
  write_file(o.out, serialize_covariance(*c));
  out << "wrote covariance (N=" << c->horizon() << ", d=" << c->dim() << ") to "
      << o.out << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Gaussian CM / reciprocal / Markov sequence toolkit", "cmseq"};
  app.require_subcommand(1);
  Options o;

  auto add_tol = [&](CLI::App* sub) {
    sub->add_option("--tol", o.tol, "relative tolerance (default 1e-8, or CMSEQ_TOL)");
  };

  CLI::App* gen = app.add_subcommand("generate", "sample trajectories from a model");
  gen->add_option("--model", o.model, "model JSON")->required();
  gen->add_option("--count", o.count, "number of paths");
  gen->add_option("--seed", o.seed, "random seed");
  gen->add_option("--out", o.out, "trajectory CSV")->required();
  gen->add_option("--threads", o.threads, "worker threads (0 = hardware)");

  CLI::App* cls = app.add_subcommand("classify", "classify a covariance");
  cls->add_option("--cov", o.cov, "covariance JSON");
  cls->add_option("--paths", o.paths, "trajectory CSV (with --empirical)");
  cls->add_flag("--empirical", o.empirical,
                "estimate the covariance from sampled paths");
  cls->add_option("--direction", o.direction, "direction for --windows");
  cls->add_option("--windows", o.windows, "interval CM window k1:k2 (repeatable)");
  cls->add_option("--out", o.out, "write JSON report here");
  add_tol(cls);

  CLI::App* fit = app.add_subcommand("fit", "fit a CM model to a covariance");
  fit->add_option("--cov", o.cov, "covariance JSON")->required();
  fit->add_option("--direction", o.direction, "first or last");
  fit->add_option("--out", o.out, "model JSON")->required();
  fit->add_flag("--no-enforce", o.no_enforce, "skip the CM precondition check");
  add_tol(fit);

  CLI::App* cov = app.add_subcommand("covariance", "export a covariance");
  cov->add_option("--model", o.model, "model JSON");
  cov->add_option("--paths", o.paths, "trajectory CSV (empirical estimate)");
  cov->add_option("--out", o.out, "covariance JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }

  try {
    if (gen->parsed()) return cmd_generate(o, out);
    if (cls->parsed()) return cmd_classify(o, out);
    if (fit->parsed()) return cmd_fit(o, out);
    return cmd_covariance(o, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }
}

}  // namespace cmseq
