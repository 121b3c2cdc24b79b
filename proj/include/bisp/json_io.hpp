#pragma once

#include <nlohmann/json.hpp>

#include "bisp/analysis.hpp"
#include "bisp/explicit_system.hpp"
#include "bisp/layered_sampler.hpp"

namespace bisp {

// {"n": int, "sets": [[int,...],...], "w": [float,...],
//  "s": [[i, j, p, value],...]} with s entries sorted by (i, j, p).
nlohmann::json system_to_json(const ExplicitSystem& sys);
ExplicitSystem system_from_json(const nlohmann::json& j);

// {"n":..., "base":{"kind":"plane"|"cyclic", ...}, "blocks":[...],
//  "accept_prob":[...], "cardinality":...}
nlohmann::json layout_to_json(const LayoutPlan& plan);

nlohmann::json metrics_to_json(const Metrics& m);

nlohmann::json report_to_json(const SystemReport& report);

}  // namespace bisp
