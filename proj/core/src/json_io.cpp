#include "bvc/json_io.hpp"

#include "bvc/errors.hpp"

#include <cstdio>
#include <utility>

namespace bvc {

namespace {

std::string join_ints(const std::vector<Outcome>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::vector<Outcome> split_ints(const std::string& key) {
  std::vector<Outcome> out;
  std::size_t pos = 0;
  while (pos <= key.size()) {
    std::size_t comma = key.find(',', pos);
    std::string part = key.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ParseError("bad outcome tuple \"" + key + "\"");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

const Json& require(const Json& j, const char* key, std::string_view what) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(std::string(what) + ": missing \"" + key + "\"");
  }
  return *it;
}

// Any stray type mismatch inside f surfaces as ParseError, so callers see
// one error family for malformed input.
template <typename F>
auto guarded(std::string_view what, F f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

Rational rational_field(const Json& j, std::string_view what) {
  if (!j.is_string()) {
    throw ParseError(std::string(what) +
                     ": rationals must be \"p/q\" strings");
  }
  return parse_rational(j.get<std::string>());
}

std::uint64_t uint_field(const Json& j, const char* key,
                         std::string_view what) {
  const Json& v = require(j, key, what);
  if (!v.is_number_unsigned()) {
    throw ParseError(std::string(what) + ": \"" + key +
                     "\" must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

// responses/thresholds sub-object for one station
template <typename T, typename Field>
std::map<std::string, T> station_map(const Json& j, const char* station,
                                     std::string_view what, Field field) {
  const Json& block = require(j, station, what);
  if (!block.is_object()) {
    throw ParseError(std::string(what) + ": \"" + station +
                     "\" must be an object");
  }
  std::map<std::string, T> out;
  for (const auto& [name, value] : block.items()) {
    out[name] = field(value);
  }
  return out;
}

}  // namespace

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

Json parse_json_text(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

Json to_json(const PairDensity& d) {
  return Json{{"pp", to_string(d.pp)},
              {"pm", to_string(d.pm)},
              {"mp", to_string(d.mp)},
              {"mm", to_string(d.mm)}};
}

PairDensity pair_density_from_json(const Json& j) {
  if (!j.is_object()) {
    throw ParseError("pair density must be an object");
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "pp" && key != "pm" && key != "mp" && key != "mm") {
      throw ParseError("pair density: unknown field \"" + key + "\"");
    }
  }
  return make_pair_density(
      rational_field(require(j, "pp", "pair density"), "pair density"),
      rational_field(require(j, "pm", "pair density"), "pair density"),
      rational_field(require(j, "mp", "pair density"), "pair density"),
      rational_field(require(j, "mm", "pair density"), "pair density"));
}

Json to_json(const JointDensity3& p) {
  Json out = Json::object();
  for (std::size_t i = 0; i < p.p.size(); ++i) {
    if (p.p[i] == 0) continue;
    auto [x, y, z] = JointDensity3::outcome(i);
    out[join_ints({x, y, z})] = to_string(p.p[i]);
  }
  return out;
}

Json to_json(const JointDensity4& p) {
  Json out = Json::object();
  for (std::size_t i = 0; i < p.p.size(); ++i) {
    if (p.p[i] == 0) continue;
    auto [a1, a2, b1, b2] = JointDensity4::outcome(i);
    out[join_ints({a1, a2, b1, b2})] = to_string(p.p[i]);
  }
  return out;
}

Json to_json(const InequalityReport& report) {
  Json out = Json::array();
  for (const auto& e : report.entries) {
    out.push_back(Json{{"id", e.id}, {"slack", to_string(e.slack)}});
  }
  return out;
}

Json to_json(const MarginalComplex& complex) {
  Json vars = Json::array();
  for (const auto& v : complex.variables) {
    vars.push_back(Json{{"name", v.name}, {"alphabet", v.alphabet}});
  }
  Json constraints = Json::array();
  for (const auto& c : complex.constraints) {
    Json table = Json::object();
    for (const auto& [cell, mass] : c.table) {
      table[join_ints(cell)] = to_string(mass);
    }
    constraints.push_back(Json{{"over", c.over}, {"table", table}});
  }
  return Json{{"variables", vars}, {"constraints", constraints}};
}

MarginalComplex complex_from_json(const Json& j) {
  return guarded("complex", [&] {
  if (!j.is_object()) throw ParseError("complex must be an object");
  MarginalComplex out;
  for (const auto& v : require(j, "variables", "complex")) {
    Variable var;
    var.name = require(v, "name", "variable").get<std::string>();
    for (const auto& a : require(v, "alphabet", "variable")) {
      if (!a.is_number_integer()) {
        throw ParseError("alphabet outcomes must be integers");
      }
      var.alphabet.push_back(a.get<Outcome>());
    }
    out.variables.push_back(std::move(var));
  }
  for (const auto& c : require(j, "constraints", "complex")) {
    MarginalConstraint constraint;
    for (const auto& name : require(c, "over", "constraint")) {
      constraint.over.push_back(name.get<std::string>());
    }
    const Json& table = require(c, "table", "constraint");
    if (!table.is_object()) {
      throw ParseError("constraint table must be an object");
    }
    for (const auto& [key, value] : table.items()) {
      constraint.table[split_ints(key)] = rational_field(value, "table");
    }
    out.constraints.push_back(std::move(constraint));
  }
  return out;
  });
}

Json to_json(const ComplexSolution& solution) {
  Json out;
  out["feasible"] = solution.feasible();
  if (solution.witness) {
    Json w = Json::object();
    for (std::size_t i = 0; i < solution.witness->size(); ++i) {
      if ((*solution.witness)[i] == 0) continue;
      w[solution.atom_ids[i]] = to_string((*solution.witness)[i]);
    }
    out["witness"] = std::move(w);
  }
  if (solution.certificate) {
    Json cert = Json::object();
    for (std::size_t i = 0; i < solution.certificate->size(); ++i) {
      if ((*solution.certificate)[i] == 0) continue;
      cert[solution.row_ids[i]] = to_string((*solution.certificate)[i]);
    }
    out["certificate"] = std::move(cert);
  }
  return out;
}

ExperimentPlan plan_from_json(const Json& j) {
  return guarded("plan", [&] {
  if (!j.is_object()) throw ParseError("plan must be an object");
  ExperimentPlan plan;
  for (const auto& s : require(j, "settings", "plan")) {
    SettingLabel label;
    label.name = require(s, "name", "setting").get<std::string>();
    if (s.contains("direction")) {
      const Json& d = s["direction"];
      if (!d.is_array() || d.size() != 3) {
        throw ParseError("setting direction must be a 3-vector");
      }
      label.direction = {{d[0].get<double>(), d[1].get<double>(),
                          d[2].get<double>()}};
    }
    plan.settings.push_back(std::move(label));
  }
  for (const auto& c : require(j, "categories", "plan")) {
    if (!c.is_array() || c.size() != 2) {
      throw ParseError("each category must be a pair of setting names");
    }
    plan.categories.emplace_back(c[0].get<std::string>(),
                                 c[1].get<std::string>());
  }
  plan.trials_per_category = uint_field(j, "trials_per_category", "plan");
  plan.seed = uint_field(j, "seed", "plan");
  return plan;
  });
}

Json to_json(const ExperimentPlan& plan) {
  Json settings = Json::array();
  for (const auto& s : plan.settings) {
    Json entry{{"name", s.name}};
    if (s.direction) entry["direction"] = *s.direction;
    settings.push_back(std::move(entry));
  }
  Json categories = Json::array();
  for (const auto& [s1, s2] : plan.categories) {
    categories.push_back(Json::array({s1, s2}));
  }
  return Json{{"settings", settings},
              {"categories", categories},
              {"trials_per_category", plan.trials_per_category},
              {"seed", plan.seed}};
}

Json canonical_model_json(const HiddenVariableModel& model) {
  Json out;
  if (const auto* m = std::get_if<FiniteSourceModel>(&model)) {
    out["kind"] = "source_finite";
    Json weights = Json::array();
    for (const auto& w : m->lambda_weights) weights.push_back(to_string(w));
    out["lambda_weights"] = std::move(weights);
    Json responses;
    for (const auto* station :
         {&m->responses_station1, &m->responses_station2}) {
      Json block = Json::object();
      for (const auto& [name, table] : *station) block[name] = table;
      responses[station == &m->responses_station1 ? "station1" : "station2"] =
          std::move(block);
    }
    out["responses"] = std::move(responses);
  } else if (const auto* m = std::get_if<ContinuousSourceModel>(&model)) {
    out["kind"] = "source_continuous";
    Json thresholds;
    for (const auto* station :
         {&m->thresholds_station1, &m->thresholds_station2}) {
      Json block = Json::object();
      for (const auto& [name, angle] : *station) block[name] = angle;
      thresholds[station == &m->thresholds_station1 ? "station1"
                                                    : "station2"] =
          std::move(block);
    }
    out["thresholds"] = std::move(thresholds);
  } else {
    const auto& ts = std::get<TimeSlotModel>(model);
    out["kind"] = "time_slot";
    Json densities = Json::array();
    for (const auto& g : ts.category_densities) {
      densities.push_back(to_json(g));
    }
    out["category_densities"] = std::move(densities);
    if (ts.slots) {
      Json slots = Json::array();
      for (const auto& slot : *ts.slots) {
        slots.push_back(Json{{"start", slot.start}, {"end", slot.end}});
      }
      out["slots"] = std::move(slots);
    }
    out["min_slot_length"] = ts.min_slot_length;
  }
  return out;
}

HiddenVariableModel model_from_json(const Json& j) {
  return guarded("model", [&]() -> HiddenVariableModel {
  if (!j.is_object()) throw ParseError("model must be an object");
  std::string kind = require(j, "kind", "model").get<std::string>();
  if (kind == "source_finite") {
    FiniteSourceModel m;
    for (const auto& w : require(j, "lambda_weights", "model")) {
      m.lambda_weights.push_back(rational_field(w, "lambda_weights"));
    }
    const Json& responses = require(j, "responses", "model");
    auto table = [](const Json& v) {
      std::vector<int> t;
      for (const auto& o : v) t.push_back(o.get<int>());
      return t;
    };
    m.responses_station1 =
        station_map<std::vector<int>>(responses, "station1", "responses", table);
    m.responses_station2 =
        station_map<std::vector<int>>(responses, "station2", "responses", table);
    return m;
  }
  if (kind == "source_continuous") {
    ContinuousSourceModel m;
    const Json& thresholds = require(j, "thresholds", "model");
    auto angle = [](const Json& v) { return v.get<double>(); };
    m.thresholds_station1 =
        station_map<double>(thresholds, "station1", "thresholds", angle);
    m.thresholds_station2 =
        station_map<double>(thresholds, "station2", "thresholds", angle);
    return m;
  }
  if (kind == "time_slot") {
    TimeSlotModel m;
    for (const auto& g : require(j, "category_densities", "model")) {
      m.category_densities.push_back(pair_density_from_json(g));
    }
    if (j.contains("slots")) {
      std::vector<TimeSlot> slots;
      for (const auto& s : j["slots"]) {
        slots.push_back(TimeSlot{require(s, "start", "slot").get<double>(),
                                 require(s, "end", "slot").get<double>()});
      }
      m.slots = std::move(slots);
    }
    if (j.contains("min_slot_length")) {
      m.min_slot_length = j["min_slot_length"].get<double>();
    }
    return m;
  }
  throw ParseError("unknown model kind \"" + kind + "\"");
  });
}

std::string model_hash(const HiddenVariableModel& model) {
  return fnv1a64_hex(canonical_model_json(model).dump());
}

Json to_json(const EmpiricalRecord& record) {
  Json categories = Json::array();
  for (const auto& c : record.categories) {
    Json entry{{"setting1", c.setting1}, {"setting2", c.setting2},
               {"n_pp", c.n_pp},         {"n_pm", c.n_pm},
               {"n_mp", c.n_mp},         {"n_mm", c.n_mm}};
    if (c.slot) {
      entry["slot"] = Json{{"start", c.slot->start}, {"end", c.slot->end}};
    }
    categories.push_back(std::move(entry));
  }
  return Json{{"model_kind", record.model_kind},
              {"model_hash", record.model_hash},
              {"seed", record.seed},
              {"trials_per_category", record.trials_per_category},
              {"categories", categories}};
}

EmpiricalRecord record_from_json(const Json& j) {
  return guarded("record", [&] {
  if (!j.is_object()) throw ParseError("record must be an object");
  EmpiricalRecord record;
  record.model_kind = require(j, "model_kind", "record").get<std::string>();
  record.model_hash = require(j, "model_hash", "record").get<std::string>();
  record.seed = uint_field(j, "seed", "record");
  record.trials_per_category = uint_field(j, "trials_per_category", "record");
  for (const auto& c : require(j, "categories", "record")) {
    CategoryTally tally;
    tally.setting1 = require(c, "setting1", "category").get<std::string>();
    tally.setting2 = require(c, "setting2", "category").get<std::string>();
    tally.n_pp = uint_field(c, "n_pp", "category");
    tally.n_pm = uint_field(c, "n_pm", "category");
    tally.n_mp = uint_field(c, "n_mp", "category");
    tally.n_mm = uint_field(c, "n_mm", "category");
    if (c.contains("slot")) {
      tally.slot = TimeSlot{require(c["slot"], "start", "slot").get<double>(),
                            require(c["slot"], "end", "slot").get<double>()};
    }
    record.categories.push_back(std::move(tally));
  }
  return record;
  });
}

Json to_json(const AnalysisReport& report) {
  Json out;
  Json categories = Json::array();
  for (const auto& [s1, s2] : report.categories) {
    categories.push_back(Json::array({s1, s2}));
  }
  out["categories"] = std::move(categories);
  Json estimates = Json::array();
  for (const auto& e : report.estimates) {
    estimates.push_back(Json{{"estimate", e.estimate},
                             {"standard_error", e.standard_error}});
  }
  out["estimates"] = std::move(estimates);
  Json rounded = Json::array();
  for (const auto& r : report.rounded) rounded.push_back(to_string(r));
  out["rounded"] = std::move(rounded);

  Json inequalities = Json::array();
  auto append = [&](const std::optional<InequalityReport>& r) {
    if (!r) return;
    for (const auto& j : to_json(*r)) inequalities.push_back(j);
  };
  append(report.tetrahedron);
  append(report.bell);
  append(report.chsh);
  out["inequalities"] = std::move(inequalities);

  out["feasible"] = report.feasible;
  if (report.witness3) out["witness"] = to_json(*report.witness3);
  if (report.witness4) out["witness"] = to_json(*report.witness4);
  if (report.chsh_certificate) {
    Json cert = Json::object();
    for (std::size_t i = 0; i < report.chsh_certificate->size(); ++i) {
      if ((*report.chsh_certificate)[i] == 0) continue;
      cert[report.chsh_row_ids[i]] = to_string((*report.chsh_certificate)[i]);
    }
    out["certificate"] = std::move(cert);
  }

  Json significance = Json::array();
  for (const auto& s : report.significance) {
    significance.push_back(Json{{"id", s.id},
                                {"slack", to_string(s.slack)},
                                {"combined_se", s.combined_se},
                                {"significant", s.significant}});
  }
  out["significance"] = std::move(significance);
  return out;
}

}  // namespace bvc
