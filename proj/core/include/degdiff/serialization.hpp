#pragma once

#include "degdiff/coefficients.hpp"
#include "degdiff/oracles.hpp"
#include "degdiff/pde.hpp"
#include "degdiff/stability.hpp"
#include "degdiff/weights.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <optional>

namespace degdiff {

using json = nlohmann::json;

/// {"family": "power-law" | "counterexample" | "tabulated", "params": {...}};
/// tabulated coefficients carry top-level "s" and "a" arrays. Parsing throws
/// ParameterError naming the offending field.
json coefficient_to_json(const Coefficient& c);
Coefficient coefficient_from_json(const json& j);

/// {"family": "power", "gamma", "scale"} or {"family": "custom", "h": id}.
json weight_to_json(const WeightPair& w);
WeightPair weight_from_json(const json& j);

json mesh_to_json(const Mesh& m);
Mesh mesh_from_json(const json& j);

/// {"kind": "bump", "center", "width", "height"} | {"kind": "sine", "k",
/// "amplitude"} | {"kind": "table", "x": [...], "u": [...]}.
json profile_to_json(const InitialProfile& p);
InitialProfile profile_from_json(const json& j);

/// {"mesh": {...}, "times": [...], "states": [[...]], "step_log": [...]}.
json trajectory_to_json(const Trajectory& t);
Trajectory trajectory_from_json(const json& j);
/// Long format, one row per (time, node): columns t,x,u.
void write_trajectory_csv(std::ostream& os, const Trajectory& t);

json envelope_to_json(const DecayEnvelope& e);
DecayEnvelope envelope_from_json(const json& j);

json series_to_json(const FunctionalSeries& s);
/// Columns t,Y,envelope,margin with margin = envelope − Y. The last two are
/// empty without an envelope.
void write_series_csv(std::ostream& os, const FunctionalSeries& s,
                      const std::optional<DecayEnvelope>& env = std::nullopt);

AssumptionParams assumption_params_from_json(const json& j);
json assumption_params_to_json(const AssumptionParams& p);
OdiParams odi_params_from_json(const json& j);
json odi_params_to_json(const OdiParams& p);

json front_report_to_json(const FrontReport& r);
json envelope_report_to_json(const EnvelopeReport& r);
json odi_report_to_json(const OdiReport& r);
json residual_report_to_json(const ResidualReport& r);

}  // namespace degdiff
