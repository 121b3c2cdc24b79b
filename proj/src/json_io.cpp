#include "bisp/json_io.hpp"

#include <algorithm>

namespace bisp {

using nlohmann::json;

json system_to_json(const ExplicitSystem& sys) {
  json j;
  j["n"] = sys.n();
  j["sets"] = sys.family.sets;
  j["w"] = sys.w;
  json entries = json::array();
  for (const auto& [pair, row] : sys.s) {
    for (const auto& [p, value] : row) {
      entries.push_back(json::array({pair.first, pair.second, p, value}));
    }
  }
  j["s"] = std::move(entries);
  return j;
}

ExplicitSystem system_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("sets") ||
      !j.contains("w") || !j.contains("s")) {
    throw ParseError(0, "system JSON needs fields n, sets, w, s");
  }
  ExplicitSystem sys;
  const auto n = j.at("n").get<std::int64_t>();
  if (n < 0 || n > UINT32_MAX) throw ParseError(0, "n out of range");
  sys.family = SetFamily(
      static_cast<std::uint32_t>(n),
      j.at("sets").get<std::vector<std::vector<std::uint32_t>>>());
  sys.w = j.at("w").get<std::vector<double>>();
  for (const auto& entry : j.at("s")) {
    if (!entry.is_array() || entry.size() != 4) {
      throw ParseError(0, "each s entry must be [i, j, p, value]");
    }
    const auto i = entry[0].get<std::uint32_t>();
    const auto jj = entry[1].get<std::uint32_t>();
    const auto p = entry[2].get<std::uint32_t>();
    const auto value = entry[3].get<double>();
    if (i >= sys.family.size() || jj >= sys.family.size()) {
      throw ParseError(0, "s entry set index out of range");
    }
    if (p >= sys.n()) throw ParseError(0, "s entry element out of range");
    auto& row = sys.s[{i, jj}];
    const auto it = std::lower_bound(
        row.begin(), row.end(), p,
        [](const auto& a, std::uint32_t key) { return a.first < key; });
    if (it != row.end() && it->first == p) {
      throw ParseError(0, "duplicate s entry for one (i, j, p)");
    }
    row.emplace(it, p, value);
  }
  return sys;
}

json layout_to_json(const LayoutPlan& plan) {
  json base;
  if (plan.base == LayoutPlan::Base::plane) {
    base = {{"kind", "plane"}, {"q", plan.q}, {"n0", plan.n0}};
  } else {
    base = {{"kind", "cyclic"}, {"n0", plan.n0}, {"t", plan.interval}};
  }
  json probs = json::array();
  for (std::size_t t = 0; t < plan.blocks.size(); ++t) {
    probs.push_back(static_cast<double>(plan.accept_num[t]) /
                    static_cast<double>(plan.accept_den[t]));
  }
  return json{{"n", plan.n},
              {"base", std::move(base)},
              {"blocks", plan.blocks},
              {"accept_prob", std::move(probs)},
              {"cardinality", plan.cardinality}};
}

json metrics_to_json(const Metrics& m) {
  json hist = json::object();
  for (const auto& [rf, count] : m.rf_histogram) {
    hist[std::to_string(rf)] = count;
  }
  return json{{"n", m.n},
              {"edges", m.edge_count},
              {"sizes", m.sizes},
              {"imbalance", m.imbalance},
              {"imbalance_num", m.imbalance_num},
              {"imbalance_den", m.imbalance_den},
              {"rf_max", m.rf_max},
              {"rf_avg", m.rf_avg},
              {"rf_histogram", std::move(hist)}};
}

json report_to_json(const SystemReport& report) {
  return json{{"valid", report.valid},
              {"intersecting", report.intersecting},
              {"balanced", report.balanced},
              {"epsilon", report.epsilon},
              {"cardinality", report.cardinality},
              {"per_element_mass", report.per_element_mass}};
}

}  // namespace bisp
