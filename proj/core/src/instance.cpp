#include "santa/instance.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace santa {

using nlohmann::json;

Instance::Instance(std::vector<std::string> resource_names,
                   std::vector<std::string> player_names,
                   std::vector<ValuationOracle> valuations)
    : resource_names_(std::move(resource_names)),
      player_names_(std::move(player_names)),
      valuations_(std::move(valuations)) {
  auto unique_names = [](const std::vector<std::string>& names) {
    std::set<std::string> seen(names.begin(), names.end());
    return seen.size() == names.size();
  };
  if (!unique_names(resource_names_)) throw InputError("duplicate resource id");
  if (!unique_names(player_names_)) throw InputError("duplicate player id");
  if (player_names_.size() != valuations_.size())
    throw InputError("every player needs exactly one valuation oracle");
}

double Instance::evaluate(int player, const Bundle& bundle) const {
  if (player < 0 || player >= num_players()) throw InputError("unknown player");
  for (int r : bundle)
    if (r < 0 || r >= num_resources())
      throw InputError("unknown resource id in bundle");
  return valuations_[player].evaluate(bundle);
}

double Instance::min_value(const Assignment& a) const {
  double lo = std::numeric_limits<double>::infinity();
  for (int p = 0; p < num_players(); ++p)
    lo = std::min(lo, evaluate(p, a.bundle_of(p)));
  return num_players() == 0 ? 0.0 : lo;
}

Instance Instance::scaled(double eta) const {
  std::vector<ValuationOracle> scaled;
  scaled.reserve(valuations_.size());
  for (const auto& v : valuations_) scaled.push_back(v.scaled(eta));
  return Instance(resource_names_, player_names_, std::move(scaled));
}

int Instance::resource_index(const std::string& name) const {
  auto it = std::find(resource_names_.begin(), resource_names_.end(), name);
  return it == resource_names_.end()
             ? -1
             : static_cast<int>(it - resource_names_.begin());
}

int Instance::player_index(const std::string& name) const {
  auto it = std::find(player_names_.begin(), player_names_.end(), name);
  return it == player_names_.end() ? -1
                                   : static_cast<int>(it - player_names_.begin());
}

namespace {

std::map<int, double> value_map(const json& j, const Instance* names,
                                const std::vector<std::string>& resources) {
  (void)names;
  std::map<int, double> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto pos = std::find(resources.begin(), resources.end(), it.key());
    if (pos == resources.end())
      throw InputError("valuation references unknown resource '" + it.key() + "'");
    out[static_cast<int>(pos - resources.begin())] = it.value().get<double>();
  }
  return out;
}

ValuationOracle oracle_from_json(const json& v,
                                 const std::vector<std::string>& resources,
                                 bool lenient_tables) {
  const std::string type = v.at("type").get<std::string>();
  if (type == "additive") {
    return ValuationOracle::additive(value_map(v.at("values"), nullptr, resources));
  }
  if (type == "truncated-additive") {
    return ValuationOracle::truncated_additive(
        value_map(v.at("values"), nullptr, resources), v.at("cap").get<double>());
  }
  if (type == "weighted-coverage") {
    std::map<int, std::vector<int>> covers;
    std::map<std::string, int> elem_ids;
    auto elem_id = [&](const std::string& e) {
      auto [it, inserted] = elem_ids.emplace(e, static_cast<int>(elem_ids.size()));
      (void)inserted;
      return it->second;
    };
    for (auto it = v.at("covers").begin(); it != v.at("covers").end(); ++it) {
      auto pos = std::find(resources.begin(), resources.end(), it.key());
      if (pos == resources.end())
        throw InputError("covers references unknown resource '" + it.key() + "'");
      std::vector<int> elems;
      for (const auto& e : it.value()) elems.push_back(elem_id(e.get<std::string>()));
      covers[static_cast<int>(pos - resources.begin())] = std::move(elems);
    }
    std::map<int, double> weights;
    for (auto it = v.at("weights").begin(); it != v.at("weights").end(); ++it)
      weights[elem_id(it.key())] = it.value().get<double>();
    return ValuationOracle::weighted_coverage(std::move(covers), std::move(weights));
  }
  if (type == "explicit-table") {
    std::vector<int> ground;
    for (const auto& g : v.at("ground")) {
      auto pos = std::find(resources.begin(), resources.end(), g.get<std::string>());
      if (pos == resources.end())
        throw InputError("ground references unknown resource");
      ground.push_back(static_cast<int>(pos - resources.begin()));
    }
    std::vector<int> order(ground.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return ground[a] < ground[b]; });
    std::vector<int> sorted_ground;
    for (int i : order) sorted_ground.push_back(ground[i]);
    std::vector<double> table(std::size_t(1) << ground.size(),
                              std::numeric_limits<double>::quiet_NaN());
    for (const auto& row : v.at("table")) {
      std::uint32_t mask = 0;
      for (const auto& nm : row.at("set")) {
        auto pos = std::find(resources.begin(), resources.end(), nm.get<std::string>());
        if (pos == resources.end()) throw InputError("table references unknown resource");
        int rid = static_cast<int>(pos - resources.begin());
        auto gp = std::find(sorted_ground.begin(), sorted_ground.end(), rid);
        if (gp == sorted_ground.end())
          throw InputError("table subset contains resource outside ground");
        mask |= 1u << (gp - sorted_ground.begin());
      }
      table[mask] = row.at("value").get<double>();
    }
    for (double x : table)
      if (std::isnan(x)) throw InputError("explicit-table is missing a subset");
    return ValuationOracle::explicit_table(std::move(sorted_ground), std::move(table),
                                           !lenient_tables);
  }
  throw InputError("unknown valuation type '" + type + "'");
}

json oracle_to_json(const ValuationOracle& o,
                    const std::vector<std::string>& resources) {
  json v;
  const Valuation* fn = o.function().get();
  if (const auto* add = dynamic_cast<const AdditiveValuation*>(fn)) {
    v["type"] = "additive";
    json values = json::object();
    for (const auto& [r, val] : add->values()) values[resources[r]] = val;
    v["values"] = values;
    return v;
  }
  if (const auto* trunc = dynamic_cast<const TruncatedAdditiveValuation*>(fn)) {
    v["type"] = "truncated-additive";
    json values = json::object();
    for (const auto& [r, val] : trunc->values()) values[resources[r]] = val;
    v["values"] = values;
    v["cap"] = trunc->cap();
    return v;
  }
  if (const auto* cov = dynamic_cast<const WeightedCoverageValuation*>(fn)) {
    v["type"] = "weighted-coverage";
    auto elem_name = [](int e) { return "u" + std::to_string(e); };
    json covers = json::object();
    for (const auto& [r, elems] : cov->covers()) {
      json arr = json::array();
      for (int e : elems) arr.push_back(elem_name(e));
      covers[resources[r]] = arr;
    }
    json weights = json::object();
    for (const auto& [e, w] : cov->weights()) weights[elem_name(e)] = w;
    v["covers"] = covers;
    v["weights"] = weights;
    return v;
  }
  if (const auto* tab = dynamic_cast<const ExplicitTableValuation*>(fn)) {
    v["type"] = "explicit-table";
    json ground = json::array();
    for (int r : tab->ground()) ground.push_back(resources[r]);
    v["ground"] = ground;
    json rows = json::array();
    const std::size_t n = tab->ground().size();
    for (std::uint32_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
      json row;
      json set = json::array();
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1u) set.push_back(resources[tab->ground()[i]]);
      row["set"] = set;
      row["value"] = tab->value_of_mask(mask);
      rows.push_back(row);
    }
    v["table"] = rows;
    return v;
  }
  throw InputError("this oracle kind cannot be serialized back to JSON");
}

}  // namespace

Instance instance_from_json(const std::string& json_text, bool lenient_tables) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid instance JSON: ") + e.what());
  }
  try {
    std::vector<std::string> resources;
    for (const auto& r : j.at("resources")) resources.push_back(r.get<std::string>());
    std::vector<std::string> players;
    std::vector<ValuationOracle> oracles;
    for (const auto& p : j.at("players")) {
      players.push_back(p.at("id").get<std::string>());
      oracles.push_back(oracle_from_json(p.at("valuation"), resources, lenient_tables));
    }
    return Instance(std::move(resources), std::move(players), std::move(oracles));
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid instance JSON: ") + e.what());
  }
}

Instance load_instance(const std::string& path, bool lenient_tables) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return instance_from_json(ss.str(), lenient_tables);
}

std::string instance_to_json(const Instance& inst) {
  json j;
  j["format_version"] = 1;
  j["resources"] = inst.resource_names();
  json players = json::array();
  for (int p = 0; p < inst.num_players(); ++p) {
    json pj;
    pj["id"] = inst.player_names()[p];
    pj["valuation"] = oracle_to_json(inst.valuation(p), inst.resource_names());
    players.push_back(pj);
  }
  j["players"] = players;
  return j.dump(2) + "\n";
}

}  // namespace santa
