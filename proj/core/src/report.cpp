#include "degdiff/report.hpp"

#include "degdiff/errors.hpp"

namespace degdiff {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::satisfied: return "satisfied";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict verdict_from_string(std::string_view s) {
  if (s == "satisfied") return Verdict::satisfied;
  if (s == "violated") return Verdict::violated;
  if (s == "inconclusive") return Verdict::inconclusive;
  throw DomainError("unknown verdict '" + std::string(s) + "'");
}

void to_json(nlohmann::json& j, const Witness& w) {
  j = {{"s", w.s}, {"value", w.value}, {"bound", w.bound},
       {"relation", w.exceeds ? "value>bound" : "value<bound"}};
  if (w.v) j["v"] = *w.v;
}

void from_json(const nlohmann::json& j, Witness& w) {
  w.s = j.at("s").get<double>();
  w.value = j.at("value").get<double>();
  w.bound = j.at("bound").get<double>();
  w.exceeds = j.value("relation", std::string("value>bound")) == "value>bound";
  if (j.contains("v")) w.v = j.at("v").get<double>();
}

void to_json(nlohmann::json& j, const ConditionReport& r) {
  j = {{"condition", r.condition},
       {"verdict", std::string(to_string(r.verdict))},
       {"constants", r.constants},
       {"witness", nullptr}};
  if (r.witness) j["witness"] = *r.witness;
  if (!r.grid.is_null()) j["grid"] = r.grid;
  if (!r.note.empty()) j["note"] = r.note;
}

void from_json(const nlohmann::json& j, ConditionReport& r) {
  r.condition = j.at("condition").get<std::string>();
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.constants = j.at("constants").get<std::map<std::string, double>>();
  r.witness.reset();
  if (j.contains("witness") && !j.at("witness").is_null()) r.witness = j.at("witness").get<Witness>();
  r.grid = j.value("grid", nlohmann::json());
  r.note = j.value("note", std::string());
}

}  // namespace degdiff
