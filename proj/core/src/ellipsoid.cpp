#include "santa/ellipsoid.hpp"

#include <cmath>

#include <json.hpp>

#include "santa/errors.hpp"

namespace santa {

long ellipsoid_iteration_budget(int dim, double outer_radius, double inner_radius) {
  if (!(outer_radius >= inner_radius) || !(inner_radius > 0))
    throw InputError("ellipsoid: need R >= r > 0");
  const double raw = 2.0 * (dim + 1.0) * (dim + 1.0) *
                     std::log(outer_radius / inner_radius);
  return static_cast<long>(std::ceil(std::max(raw, 1.0)));
}

FeasibilityResult solve_feasibility(int dim, const EllipsoidOptions& options,
                                    const SeparationCallback& oracle) {
  if (dim <= 0) throw InputError("ellipsoid: dimension must be positive");
  const long volume_budget =
      ellipsoid_iteration_budget(dim, options.outer_radius, options.inner_radius);
  const long cap = std::min(volume_budget, options.hard_cap);

  Eigen::VectorXd x = options.start_center.value_or(Eigen::VectorXd::Zero(dim));
  if (x.size() != dim) throw InputError("ellipsoid: start center dimension mismatch");
  Eigen::MatrixXd shape = Eigen::MatrixXd::Identity(dim, dim) *
                          (options.outer_radius * options.outer_radius);

  FeasibilityResult result;
  const double n = dim;
  for (long iter = 0; iter < cap; ++iter) {
    result.iterations = iter + 1;
    SeparationResponse resp = oracle(x);
    if (resp.member) {
      result.status = FeasibilityStatus::FoundPoint;
      result.point = x;
      return result;
    }
    const Eigen::VectorXd& w = resp.cut.w;
    if (w.size() != dim) throw ContractError("ellipsoid: cut dimension mismatch");
    const double wnorm = w.norm();
    if (!(wnorm > 0)) throw ContractError("ellipsoid: zero cut vector");
    // The callback must separate the queried point from the inner set.
    if (w.dot(x) < resp.cut.rhs - 1e-7 * std::max(1.0, wnorm * x.norm()))
      throw ContractError("ellipsoid: hyperplane does not separate the query point");
    if (options.record_transcript) result.transcript.push_back({x, resp.cut});

    Eigen::VectorXd aw = shape * w;
    const double s2 = w.dot(aw);
    // Degenerate along the cut direction: nothing left to search there.
    const double degeneracy_floor =
        1e-14 * w.squaredNorm() * std::max(1.0, shape.trace() / dim);
    if (!(s2 > degeneracy_floor)) {
      result.status = FeasibilityStatus::VolumeExhausted;
      return result;
    }
    const double s = std::sqrt(s2);
    Eigen::VectorXd b = aw / s;
    // Rank-1 identity b^T shape^{-1} b == 1 pins the volume drop to the
    // closed-form central-cut factor; verify it stays on contract.
    const double q = w.dot(b) / s;
    if (std::fabs(q - 1.0) > options.contract_tol)
      throw ContractError("ellipsoid: volume-factor identity drifted");

    if (dim == 1) {
      // Degenerate case: the ellipsoid is an interval, a central cut halves it.
      x -= b / 2.0;
      shape *= 0.25;
    } else {
      x -= b / (n + 1.0);
      shape = (n * n / (n * n - 1.0)) *
              (shape - (2.0 / (n + 1.0)) * (b * b.transpose()));
    }
    if ((iter + 1) % 50 == 0)
      shape = ((shape + shape.transpose()) * 0.5).eval();
  }

  result.status = cap < volume_budget ? FeasibilityStatus::BudgetExhausted
                                      : FeasibilityStatus::VolumeExhausted;
  return result;
}

MaximizeResult maximize_with_binary_search(int dim, const EllipsoidOptions& options,
                                           const Eigen::VectorXd& objective,
                                           const SeparationCallback& oracle,
                                           double eps_bs) {
  MaximizeResult best;
  const double cnorm = objective.norm();

  auto attempt = [&](double threshold) -> bool {
    SeparationCallback wrapped = [&](const Eigen::VectorXd& x) {
      if (objective.dot(x) < threshold)
        return SeparationResponse::separate(-objective, -threshold);
      return oracle(x);
    };
    FeasibilityResult r = solve_feasibility(dim, options, wrapped);
    if (!r.found()) return false;
    const double got = objective.dot(r.point);
    if (!best.found || got > best.value) {
      best.found = true;
      best.point = r.point;
      best.value = got;
    }
    return true;
  };

  if (!attempt(-cnorm * options.outer_radius - 1.0)) return best;  // Q empty

  double lo = best.value;
  double hi = cnorm * options.outer_radius + 1e-12;
  while (hi - lo > eps_bs) {
    const double mid = 0.5 * (lo + hi);
    if (attempt(mid))
      lo = std::max(mid, best.value);
    else
      hi = mid;
  }
  return best;
}

std::string transcript_to_json(const FeasibilityResult& result) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["iterations"] = result.iterations;
  j["status"] = result.status == FeasibilityStatus::FoundPoint      ? "found"
                : result.status == FeasibilityStatus::VolumeExhausted ? "volume-exhausted"
                                                                      : "budget-exhausted";
  j["cuts"] = nlohmann::json::array();
  for (const auto& rec : result.transcript) {
    nlohmann::json c;
    c["center"] = std::vector<double>(rec.center.data(),
                                      rec.center.data() + rec.center.size());
    c["w"] = std::vector<double>(rec.cut.w.data(), rec.cut.w.data() + rec.cut.w.size());
    c["rhs"] = rec.cut.rhs;
    j["cuts"].push_back(c);
  }
  return j.dump(2) + "\n";
}

}  // namespace santa
