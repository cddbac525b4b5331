#pragma once

#include "bvc/densities.hpp"
#include "bvc/marginal_complex.hpp"
#include "bvc/reconstruct.hpp"
#include "bvc/sim.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

// JSON exchange formats. Rationals travel as "p/q" strings, never floats;
// ordered_json keeps member order fixed so serialized records are stable
// byte-for-byte across runs and thread counts.

namespace bvc {

using Json = nlohmann::ordered_json;

// FNV-1a, 64-bit, rendered as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

// --- pair densities and covariances ---------------------------------------

Json to_json(const PairDensity& d);
PairDensity pair_density_from_json(const Json& j);

// {"1,1": "...", "1,-1": ...}; omits zero cells on output, treats missing
// cells as zero on input.
Json to_json(const JointDensity3& p);
Json to_json(const JointDensity4& p);

Json to_json(const InequalityReport& report);

// --- marginal complexes ----------------------------------------------------

Json to_json(const MarginalComplex& complex);
MarginalComplex complex_from_json(const Json& j);

// {"feasible": ..., "witness": atom -> mass} or
// {"feasible": ..., "certificate": constraint-id -> multiplier}.
Json to_json(const ComplexSolution& solution);

// --- simulator configs -----------------------------------------------------

ExperimentPlan plan_from_json(const Json& j);
Json to_json(const ExperimentPlan& plan);

// Canonical form: fixed member order, responses keyed in sorted setting
// order. model_hash is FNV-1a 64 of its dump().
Json canonical_model_json(const HiddenVariableModel& model);
HiddenVariableModel model_from_json(const Json& j);
std::string model_hash(const HiddenVariableModel& model);

Json to_json(const EmpiricalRecord& record);
EmpiricalRecord record_from_json(const Json& j);

Json to_json(const AnalysisReport& report);

// Parses text as JSON; wraps nlohmann parse failures in ParseError.
Json parse_json_text(std::string_view text, std::string_view what);

}  // namespace bvc
