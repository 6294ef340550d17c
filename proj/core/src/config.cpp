#include "santa/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "santa/errors.hpp"

namespace santa {

using nlohmann::json;

double log2_clamped(double n) { return std::max(1.0, std::log2(std::max(n, 1.0))); }

Params SolveConfig::resolve(int n) const {
  if (mode == Mode::Practical) return practical;
  Params p;
  const double ln = log2_clamped(n);
  p.alpha = 40.0;
  p.beta = static_cast<std::int64_t>(std::ceil(10.0 * ln));
  const double loglog = log2_clamped(ln);
  p.h = static_cast<int>(
      std::ceil(1.0 + log2_clamped(static_cast<double>(p.beta) * n * n) / loglog));
  const double b = static_cast<double>(p.beta);
  p.gamma = std::ceil(1000.0 * std::pow(p.alpha, 3) * b * b * b *
                      std::pow(p.h, 4) * ln * ln);
  return p;
}

double SolveConfig::round_budget(int n, std::int64_t beta) const {
  const double ln = log2_clamped(n);
  return std::max(1.0, 6.0 * static_cast<double>(beta) * ln * ln * ln *
                           rounding.budget_scale);
}

double SolveConfig::cgreedy_delta(int n) const {
  if (mode == Mode::Theory) return 1.0 / (10.0 * n * n);
  return cgreedy.delta;
}

int SolveConfig::cgreedy_samples(int n) const {
  if (mode == Mode::Theory) {
    const double d = cgreedy_delta(n);
    return static_cast<int>(std::ceil(10.0 / (d * d) * (1.0 + std::log(std::max(1, n)))));
  }
  return cgreedy.samples;
}

int SolveConfig::separation_attempt_cap(int n) const {
  return sep.attempt_cap_factor *
         static_cast<int>(std::ceil(std::log(std::max(2, n))));
}

namespace {

template <class T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

SolveConfig config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid config JSON: ") + e.what());
  }
  SolveConfig c;
  if (j.contains("mode")) {
    const std::string m = j.at("mode").get<std::string>();
    if (m == "theory")
      c.mode = Mode::Theory;
    else if (m == "practical")
      c.mode = Mode::Practical;
    else
      throw InputError("config: mode must be 'theory' or 'practical'");
  }
  maybe(j, "alpha", c.practical.alpha);
  maybe(j, "beta", c.practical.beta);
  maybe(j, "gamma", c.practical.gamma);
  maybe(j, "h", c.practical.h);
  maybe(j, "seed", c.seed);
  maybe(j, "binary_search_steps", c.binary_search_steps);
  maybe(j, "augment_iteration_cap", c.augment_iteration_cap);
  if (j.contains("ellipsoid")) {
    const json& e = j.at("ellipsoid");
    maybe(e, "outer_radius", c.ellipsoid.outer_radius);
    maybe(e, "inner_radius", c.ellipsoid.inner_radius);
    maybe(e, "hard_cap", c.ellipsoid.hard_cap);
    maybe(e, "linsep_hard_cap", c.ellipsoid.linsep_hard_cap);
    maybe(e, "base_level_cap", c.ellipsoid.base_level_cap);
    maybe(e, "eps_bs", c.ellipsoid.eps_bs);
  }
  if (j.contains("cgreedy")) {
    const json& g = j.at("cgreedy");
    maybe(g, "delta", c.cgreedy.delta);
    maybe(g, "samples", c.cgreedy.samples);
  }
  if (j.contains("sep")) {
    const json& s = j.at("sep");
    maybe(s, "attempt_cap_factor", c.sep.attempt_cap_factor);
    maybe(s, "epsilon", c.sep.epsilon);
  }
  if (j.contains("rounding")) {
    const json& r = j.at("rounding");
    maybe(r, "attempt_cap", c.rounding.attempt_cap);
    maybe(r, "budget_scale", c.rounding.budget_scale);
  }
  return c;
}

SolveConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string config_to_json(const SolveConfig& c) {
  json j;
  j["format_version"] = 1;
  j["mode"] = c.mode == Mode::Theory ? "theory" : "practical";
  j["alpha"] = c.practical.alpha;
  j["beta"] = c.practical.beta;
  j["gamma"] = c.practical.gamma;
  j["h"] = c.practical.h;
  j["seed"] = c.seed;
  j["binary_search_steps"] = c.binary_search_steps;
  j["augment_iteration_cap"] = c.augment_iteration_cap;
  j["ellipsoid"] = {{"outer_radius", c.ellipsoid.outer_radius},
                    {"inner_radius", c.ellipsoid.inner_radius},
                    {"hard_cap", c.ellipsoid.hard_cap},
                    {"linsep_hard_cap", c.ellipsoid.linsep_hard_cap},
                    {"base_level_cap", c.ellipsoid.base_level_cap},
                    {"eps_bs", c.ellipsoid.eps_bs}};
  j["cgreedy"] = {{"delta", c.cgreedy.delta}, {"samples", c.cgreedy.samples}};
  j["sep"] = {{"attempt_cap_factor", c.sep.attempt_cap_factor},
              {"epsilon", c.sep.epsilon}};
  j["rounding"] = {{"attempt_cap", c.rounding.attempt_cap},
                   {"budget_scale", c.rounding.budget_scale}};
  return j.dump(2) + "\n";
}

}  // namespace santa
