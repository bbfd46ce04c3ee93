#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "randcrit/common.hpp"
#include "randcrit/ensembles.hpp"
#include "randcrit/io.hpp"

namespace randcrit::cli {

namespace {

const char* const kCommands[] = {"density", "zeros-mc", "real-zeros", "attractors",
                                 "flux-vacua", "flux-continuum", "report"};

[[noreturn]] void invalid(const std::string& msg) {
  throw Error(ErrorCode::InvalidConfig, msg);
}

std::vector<double> split_numbers(const std::string& s, std::size_t expected,
                                  const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != tok.size()) invalid(std::string("cannot parse ") + what + " '" + s + "'");
    out.push_back(v);
  }
  if (out.size() != expected) invalid(std::string("malformed ") + what + " '" + s + "'");
  return out;
}

}  // namespace

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = c.command;
  j["ensemble"] = c.ensemble;
  j["degrees"] = c.degrees;
  j["grid"] = {{"min", c.grid_min}, {"max", c.grid_max}, {"n", c.grid_n}};
  j["model"] = {{"kind", c.model},
                {"kappa", c.kappa},
                {"eta", c.model == "cubic" ? "X0,X1,F1,F0;eta03=eta12=+1" : "X0,F0;eta01=+1"}};
  j["region"] = {{"x0", c.x0}, {"x1", c.x1}, {"y0", c.y0}, {"y1", c.y1}};
  j["zmax"] = c.zmax;
  j["lmax"] = c.lmax;
  j["box"] = c.box;
  j["start_grid"] = c.start_grid;
  j["prefilter"] = c.prefilter;
  j["flux_sign"] = c.flux_sign;
  j["box_radius"] = c.box_radius;
  j["bins"] = c.bins;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["out"] = c.out;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    if (!j.is_object()) invalid("config must be a JSON object");
    c.command = j.value("command", c.command);
    c.ensemble = j.value("ensemble", c.ensemble);
    if (j.contains("degrees")) c.degrees = j.at("degrees").get<std::vector<int>>();
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      c.grid_min = g.value("min", c.grid_min);
      c.grid_max = g.value("max", c.grid_max);
      c.grid_n = g.value("n", c.grid_n);
    }
    if (j.contains("model")) {
      const auto& m = j.at("model");
      c.model = m.value("kind", c.model);
      c.kappa = m.value("kappa", c.kappa);
    }
    if (j.contains("region")) {
      const auto& r = j.at("region");
      c.x0 = r.value("x0", c.x0);
      c.x1 = r.value("x1", c.x1);
      c.y0 = r.value("y0", c.y0);
      c.y1 = r.value("y1", c.y1);
    }
    c.zmax = j.value("zmax", c.zmax);
    c.lmax = j.value("lmax", c.lmax);
    c.box = j.value("box", c.box);
    c.start_grid = j.value("start_grid", c.start_grid);
    c.prefilter = j.value("prefilter", c.prefilter);
    c.flux_sign = j.value("flux_sign", c.flux_sign);
    c.box_radius = j.value("box_radius", c.box_radius);
    c.bins = j.value("bins", c.bins);
    c.samples = j.value("samples", c.samples);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    c.out = j.value("out", c.out);
  } catch (const nlohmann::json::exception& e) {
    invalid(std::string("bad config field: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    invalid("config " + path + " is not valid JSON: " + e.what());
  }
  // a summary.json carries the config under "config"
  if (j.is_object() && j.contains("config") && j.at("config").is_object())
    return config_from_json(j.at("config"));
  return config_from_json(j);
}

void parse_grid(const std::string& s, ExperimentConfig& c) {
  const auto v = split_numbers(s, 3, "grid");
  if (v[2] != std::floor(v[2])) invalid("grid bin count must be an integer");
  c.grid_min = v[0];
  c.grid_max = v[1];
  c.grid_n = static_cast<int>(v[2]);
}

void parse_region(const std::string& s, ExperimentConfig& c) {
  const auto v = split_numbers(s, 4, "region");
  c.x0 = v[0];
  c.x1 = v[1];
  c.y0 = v[2];
  c.y1 = v[3];
}

void validate(const ExperimentConfig& c) {
  bool known = false;
  for (const char* k : kCommands) known = known || c.command == k;
  if (!known) invalid("unknown command '" + c.command + "'");
  if (c.threads < 0) invalid("threads must be >= 0");
  if (c.samples < 1) invalid("samples must be >= 1");

  const std::string& cmd = c.command;
  if (cmd == "density" || cmd == "zeros-mc" || cmd == "real-zeros" || cmd == "report") {
    if (c.degrees.empty()) invalid("need at least one degree");
    const auto kind = parse_ensemble(c.ensemble);
    for (int n : c.degrees) {
      if (n < 1) invalid("degree must be >= 1");
      if (kind == EnsembleKind::Kostlan && n > kostlan_max_degree() && cmd != "real-zeros" &&
          cmd != "report")
        throw Error(ErrorCode::Overflow, "Kostlan variances overflow above degree " +
                                             std::to_string(kostlan_max_degree()));
    }
  }
  if (cmd == "density" || cmd == "zeros-mc") {
    if (!(c.grid_max > c.grid_min) || !std::isfinite(c.grid_min) || !std::isfinite(c.grid_max))
      invalid("grid needs min < max");
    if (c.grid_n < 1) invalid("grid needs at least one bin");
    if (c.degrees.size() != 1) invalid(cmd + " takes a single degree");
  }
  if (cmd == "attractors" || cmd == "flux-vacua" || cmd == "flux-continuum" || cmd == "report") {
    for (double v : {c.x0, c.x1, c.y0, c.y1})
      if (!std::isfinite(v)) invalid("region bounds must be finite");
    if (c.x1 > c.x0 && c.y1 > c.y0 && c.y0 < 1e-6)
      throw Error(ErrorCode::DomainError, "region must satisfy Im >= 1e-6");
  }
  if (cmd == "attractors") {
    if (c.model != "cubic") invalid("attractors run on the cubic model");
    if (!(c.kappa > 0) || !std::isfinite(c.kappa)) invalid("kappa must be positive");
    if (!(c.zmax >= 0) || !std::isfinite(c.zmax)) invalid("zmax must be finite and >= 0");
    if (c.box < 1) invalid("box must be >= 1");
    if (c.start_grid < 1) invalid("start grid must be >= 1");
  }
  if (cmd == "flux-vacua" || cmd == "flux-continuum") {
    if (c.lmax < 1) invalid("lmax must be >= 1");
    if (c.flux_sign != 1 && c.flux_sign != -1) invalid("flux sign must be +1 or -1");
    const bool empty = !(c.x1 > c.x0) || !(c.y1 > c.y0);
    if (!empty) {
      const double xmin = (c.x0 <= 0 && c.x1 >= 0) ? 0.0 : std::min(std::abs(c.x0), std::abs(c.x1));
      if (c.x0 < -0.5 || c.x1 > 0.5 || xmin * xmin + c.y0 * c.y0 < 1.0)
        throw Error(ErrorCode::DomainError, "region must lie in |Re tau| <= 1/2, |tau| >= 1");
    }
  }
  if (cmd == "flux-vacua") {
    if (c.box < 1) invalid("box must be >= 1");
    if (c.bins < 1) invalid("bins must be >= 1");
  }
  if (cmd == "flux-continuum" && (c.box_radius < 0 || !std::isfinite(c.box_radius)))
    invalid("box radius must be >= 0");
}

std::string config_hash(const ExperimentConfig& c) {
  auto j = to_json(c);
  j.erase("threads");
  j.erase("out");
  return fnv1a_hex(j.dump());
}

}  // namespace randcrit::cli
