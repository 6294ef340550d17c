#include "santa/canonical.hpp"

#include <algorithm>
#include <cmath>

namespace santa {

namespace {

constexpr double kTol = 1e-9;

// f(S) = 1 if the private resource is in S, else min(1, small(S)).
class ComplexPlayerValuation final : public Valuation {
 public:
  ComplexPlayerValuation(int private_resource, ValuationOracle small)
      : private_(private_resource), small_(std::move(small)) {}

  double eval(const Bundle& bundle) const override {
    if (std::binary_search(bundle.begin(), bundle.end(), private_)) return 1.0;
    return std::min(1.0, small_.evaluate(bundle));
  }

  std::vector<int> support() const override {
    std::vector<int> s = small_.support();
    s.insert(std::lower_bound(s.begin(), s.end(), private_), private_);
    return s;
  }

 private:
  int private_;
  ValuationOracle small_;
};

}  // namespace

double CanonicalInstance::basic_value(int basic, const Bundle& bundle) const {
  for (int r : basic_covers[basic])
    if (std::binary_search(bundle.begin(), bundle.end(), r)) return 1.0;
  return 0.0;
}

double CanonicalInstance::complex_value(int cplx, const Bundle& bundle) const {
  if (std::binary_search(bundle.begin(), bundle.end(), private_resource[cplx]))
    return 1.0;
  return std::min(1.0, complex_small[cplx].evaluate(bundle));
}

double CanonicalInstance::player_value(int player, const Bundle& bundle) const {
  return is_basic(player) ? basic_value(player, bundle)
                          : complex_value(complex_index(player), bundle);
}

double CanonicalInstance::singleton_value(int player, int r) const {
  return player_value(player, Bundle{r});
}

bool CanonicalInstance::singleton_is_one(int player, int r) const {
  return singleton_value(player, r) >= 1.0 - kTol;
}

ValuationOracle CanonicalInstance::complex_oracle(int cplx) const {
  return ValuationOracle(ValuationKind::Derived,
                         std::make_shared<ComplexPlayerValuation>(
                             private_resource[cplx], complex_small[cplx]));
}

void CanonicalInstance::validate() const {
  if (!(gamma >= 1.0)) throw InputError("canonical instance: gamma must be >= 1");
  for (const auto& covers : basic_covers)
    for (int r : covers)
      if (r < 0 || r >= num_resources())
        throw InputError("canonical instance: cover resource out of range");
  for (int c = 0; c < num_complex(); ++c) {
    const int rp = private_resource[c];
    if (rp < 0 || rp >= num_resources())
      throw InputError("canonical instance: private resource out of range");
    if (complex_small[c].evaluate(Bundle{rp}) > kTol)
      throw InputError("canonical instance: small function must ignore the private resource");
    for (int d = 0; d < num_complex(); ++d) {
      if (d == c) continue;
      if (complex_small[d].evaluate(Bundle{rp}) > kTol)
        throw InputError("canonical instance: private resource valued by another complex player");
    }
    for (int r = 0; r < num_resources(); ++r) {
      if (r == rp) continue;
      if (complex_small[c].evaluate(Bundle{r}) >= 1.0 / gamma - kTol &&
          complex_small[c].evaluate(Bundle{r}) > kTol)
        throw InputError("canonical instance: non-private singleton >= 1/gamma");
    }
  }
}

CanonicalReduction canonicalize(const Instance& instance, double gamma) {
  if (!(gamma >= 1.0)) throw InputError("canonicalize: gamma must be >= 1");
  const int R = instance.num_resources();
  const int P = instance.num_players();

  CanonicalReduction red;
  red.num_original_resources = R;
  red.canonical.gamma = gamma;
  red.canonical.resource_names = instance.resource_names();
  for (int p = 0; p < P; ++p)
    red.canonical.resource_names.push_back("private:" +
                                           instance.player_names()[p]);

  red.big_resources.resize(P);
  for (int p = 0; p < P; ++p) {
    for (int r = 0; r < R; ++r) {
      if (instance.evaluate(p, Bundle{r}) >= 1.0 / gamma - kTol)
        red.big_resources[p].push_back(r);
    }
  }

  for (int p = 0; p < P; ++p) {
    // Basic player p': value 1 iff the bundle hits R_p^b or the new private.
    std::vector<int> covers = red.big_resources[p];
    covers.push_back(red.private_of(p));
    red.canonical.basic_covers.push_back(make_bundle(std::move(covers)));

    // Complex player p'': private plus the small-value part of f_p, i.e. f_p
    // with big resources masked out, capped at the target value.
    std::vector<int> allowed;
    for (int r = 0; r < R; ++r)
      if (!std::binary_search(red.big_resources[p].begin(),
                              red.big_resources[p].end(), r))
        allowed.push_back(r);
    auto restricted = std::make_shared<RestrictedValuation>(
        instance.valuation(p).scaled_function(), std::move(allowed));
    auto capped = std::make_shared<CappedValuation>(std::move(restricted), 1.0);
    red.canonical.private_resource.push_back(red.private_of(p));
    red.canonical.complex_small.push_back(
        ValuationOracle(ValuationKind::Derived, std::move(capped)));
  }
  red.canonical.validate();
  return red;
}

Assignment decanonicalize(const CanonicalReduction& red,
                          const Assignment& canonical_solution) {
  const CanonicalInstance& c = red.canonical;
  const int P = c.num_complex();  // = number of original players
  if (canonical_solution.size() != c.num_resources())
    throw InputError("decanonicalize: assignment size mismatch");

  std::vector<Bundle> bundle_basic(P), bundle_complex(P);
  for (int r = 0; r < canonical_solution.size(); ++r) {
    const int owner = canonical_solution.owner[r];
    if (owner == Assignment::kUnassigned) continue;
    if (c.is_basic(owner))
      bundle_basic[owner].push_back(r);
    else
      bundle_complex[c.complex_index(owner)].push_back(r);
  }

  Assignment out(red.num_original_resources);
  const double need = 1.0 / c.gamma - kTol;
  for (int p = 0; p < P; ++p) {
    if (c.basic_value(p, bundle_basic[p]) < need ||
        c.complex_value(p, bundle_complex[p]) < need)
      throw ContractError("decanonicalize: player pair not covered to 1/gamma");

    const int priv = red.private_of(p);
    const bool basic_has_private =
        std::binary_search(bundle_basic[p].begin(), bundle_basic[p].end(), priv);
    if (!basic_has_private) {
      // Case (a): the basic half holds a big original resource.
      int big = -1;
      for (int r : bundle_basic[p]) {
        if (r < red.num_original_resources &&
            std::binary_search(red.big_resources[p].begin(),
                               red.big_resources[p].end(), r)) {
          big = r;
          break;
        }
      }
      if (big < 0) throw ContractError("decanonicalize: covered basic player holds no cover");
      out.owner[big] = p;
    } else {
      // Case (b): the complex half is covered by small original resources.
      for (int r : bundle_complex[p])
        if (r < red.num_original_resources) out.owner[r] = p;
    }
  }
  return out;
}

Instance canonical_as_instance(const CanonicalInstance& c) {
  std::vector<std::string> players;
  std::vector<ValuationOracle> oracles;
  for (int b = 0; b < c.num_basic(); ++b) {
    players.push_back("basic:" + std::to_string(b));
    std::map<int, double> vals;
    for (int r : c.basic_covers[b]) vals[r] = 1.0;
    oracles.push_back(ValuationOracle::truncated_additive(std::move(vals), 1.0));
  }
  for (int cp = 0; cp < c.num_complex(); ++cp) {
    players.push_back("complex:" + std::to_string(cp));
    oracles.push_back(c.complex_oracle(cp));
  }
  return Instance(c.resource_names, std::move(players), std::move(oracles));
}

}  // namespace santa
