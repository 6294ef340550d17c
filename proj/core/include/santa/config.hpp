#pragma once

#include <cstdint>
#include <string>

namespace santa {

// log base 2, clamped below by 1 (used by every bound in the pipeline).
double log2_clamped(double n);

struct EllipsoidConfig {
  double outer_radius = 1e3;
  double inner_radius = 1e-6;
  long hard_cap = 20000;        // per feasibility run
  long linsep_hard_cap = 1500;  // inner runs inside the separation oracle
  long base_level_cap = 48;    // dual search at the last level, which falls
                                // back to the exact base case afterwards
  double eps_bs = 1e-3;         // binary-search optimization slack
};

struct CgreedyConfig {
  double delta = 0.02;  // step size (theory mode: 1/(10 n^2))
  int samples = 2000;   // marginal-estimate samples (theory: 10/delta^2 (1+ln n))
};

struct SepConfig {
  int attempt_cap_factor = 64;  // rounding attempts = factor * ceil(ln n)
  double epsilon = 0.1;         // fractional-value gate 1 - 1/e - epsilon
};

struct RoundingConfig {
  int attempt_cap = 32;        // per-level resampling attempts
  double budget_scale = 1.0;   // scales the 6 beta log^3 n budget
};

enum class Mode { Practical, Theory };

// Parameters after resolving the mode against an instance size n.
struct Params {
  double alpha = 40.0;
  std::int64_t beta = 3;
  double gamma = 8.0;
  int h = 2;
};

struct SolveConfig {
  Mode mode = Mode::Practical;
  Params practical;  // used verbatim in practical mode
  std::uint64_t seed = 0;
  int binary_search_steps = 40;
  int augment_iteration_cap = 64;
  EllipsoidConfig ellipsoid;
  CgreedyConfig cgreedy;
  SepConfig sep;
  RoundingConfig rounding;

  // Theory mode computes alpha = 40, beta = ceil(10 log n),
  // h = ceil(1 + log(beta n^2) / log log n) and
  // gamma = ceil(1000 alpha^3 beta^3 h^4 log^2 n); practical mode returns the
  // configured values unchanged.
  Params resolve(int n) const;

  // Budget vector value for the top-level LP query: 6 beta log^3 n, scaled.
  double round_budget(int n, std::int64_t beta) const;

  // Continuous-greedy step/System sizes for ground-set size n.
  double cgreedy_delta(int n) const;
  int cgreedy_samples(int n) const;
  int separation_attempt_cap(int n) const;
};

SolveConfig config_from_json(const std::string& json_text);
SolveConfig load_config(const std::string& path);
std::string config_to_json(const SolveConfig& config);

}  // namespace santa
