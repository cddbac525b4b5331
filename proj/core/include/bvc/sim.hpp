#pragma once

#include "bvc/densities.hpp"
#include "bvc/polytopes.hpp"
#include "bvc/reconstruct.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bvc {

struct SettingLabel {
  std::string name;
  std::optional<std::array<double, 3>> direction;  // unit vector when given
};

// One run plan: which setting pair each category measures, how many trials
// per category, and the seed that makes the whole record reproducible.
struct ExperimentPlan {
  std::vector<SettingLabel> settings;
  std::vector<std::pair<std::string, std::string>> categories;  // (station 1, station 2)
  std::uint64_t trials_per_category = 0;
  std::uint64_t seed = 0;
};

// Throws InvalidModel on duplicate/unknown setting names, non-unit
// directions (1e-12 tolerance), empty categories or zero trials.
void validate_plan(const ExperimentPlan& plan);

// ---------------------------------------------------------------------------
// Hidden-variable model classes
// ---------------------------------------------------------------------------

// A single source variable with a finite alphabet and exact weights;
// station outcomes are deterministic per-setting sign tables over that
// alphabet. Both stations share one probability space by construction, so
// the Bell inequalities hold for the resulting covariances. Station tables
// are kept separate so degenerate conventions can be expressed; use shared
// tables when a setting appears at both stations and the three-variable
// reading is intended.
struct FiniteSourceModel {
  std::vector<Rational> lambda_weights;                         // >= 0, sum 1
  std::map<std::string, std::vector<int>> responses_station1;   // setting -> +-1 per lambda
  std::map<std::string, std::vector<int>> responses_station2;

  // Exact model covariance for a category: sum_l w_l R1(s1,l) R2(s2,l).
  Rational expected_covariance(const std::string& setting1,
                               const std::string& setting2) const;
};

// Source variable uniform on [0, 2pi); outcome is +1 iff
// cos(lambda - threshold(setting)) >= 0.
struct ContinuousSourceModel {
  std::map<std::string, double> thresholds_station1;  // setting -> angle
  std::map<std::string, double> thresholds_station2;
};

struct TimeSlot {
  double start = 0.0;
  double end = 0.0;

  double length() const { return end - start; }
  bool operator==(const TimeSlot&) const = default;
};

// Each category is drawn in its own disjoint measurement-time slot from its
// own pair density: distinct probability spaces per category, which is
// exactly the freedom that setting- and time-dependent equipment variables
// provide. Nothing forces the per-category densities to share a joint
// model, so the Bell inequalities need not hold.
struct TimeSlotModel {
  std::vector<PairDensity> category_densities;  // one per plan category
  std::optional<std::vector<TimeSlot>> slots;   // default: [i, i+1)
  double min_slot_length = 1.0;                 // abstract ticks
};

using HiddenVariableModel =
    std::variant<FiniteSourceModel, ContinuousSourceModel, TimeSlotModel>;

// ---------------------------------------------------------------------------
// Records and analysis
// ---------------------------------------------------------------------------

struct CategoryTally {
  std::string setting1, setting2;
  std::uint64_t n_pp = 0, n_pm = 0, n_mp = 0, n_mm = 0;
  std::optional<TimeSlot> slot;  // present for time-slot runs

  std::uint64_t trials() const { return n_pp + n_pm + n_mp + n_mm; }
};

// Per-category outcome tallies plus provenance. A trial belongs to exactly
// one category; for time-slot runs the categories occupy pairwise disjoint
// slots, so no trial is ever evaluated under two of them.
struct EmpiricalRecord {
  std::vector<CategoryTally> categories;
  std::uint64_t trials_per_category = 0;
  std::uint64_t seed = 0;
  std::string model_kind;  // "source_finite" | "source_continuous" | "time_slot"
  std::string model_hash;  // FNV-1a 64 of the canonical model JSON
};

// Deterministic given (model, plan): per-(category, trial) counter RNG
// streams, so the thread count never changes the record. Throws
// InvalidModel / UnscheduledCategory on model-plan mismatches.
EmpiricalRecord run_experiment(const HiddenVariableModel& model,
                               const ExperimentPlan& plan,
                               unsigned threads = 1);

struct CovarianceEstimate {
  double estimate = 0.0;        // (n_pp - n_pm - n_mp + n_mm) / N
  double standard_error = 0.0;  // sqrt((1 - estimate^2) / N)
};

// Throws EmptyCategory if any category has zero trials.
std::vector<CovarianceEstimate> empirical_covariances(const EmpiricalRecord& r);

// How far outside noise an inequality sits: `slack` is exact at the rounded
// covariances, `combined_se` the root-sum-square standard error of the
// covariances entering the inequality. significant <=> slack < -band * se.
struct SignificanceEntry {
  std::string id;
  Rational slack;
  double combined_se = 0.0;
  bool significant = false;
};

inline constexpr double kSignificanceBand = 5.0;
inline constexpr std::uint64_t kDefaultMaxDenominator = 10'000;

struct AnalysisReport {
  std::vector<std::pair<std::string, std::string>> categories;
  std::vector<CovarianceEstimate> estimates;
  std::vector<Rational> rounded;  // continued-fraction rounding of estimates

  // Three-category path
  std::optional<InequalityReport> tetrahedron;
  std::optional<InequalityReport> bell;
  std::optional<JointDensity3> witness3;

  // Four-category path
  std::optional<InequalityReport> chsh;
  std::optional<JointDensity4> witness4;
  std::optional<std::vector<Rational>> chsh_certificate;
  std::vector<std::string> chsh_row_ids;

  bool feasible = false;
  std::vector<SignificanceEntry> significance;
};

// Interprets a three-category record as the pairs (AB, AC, BC) and a
// four-category record as (A1B1, A1B2, A2B1, A2B2); rounds the estimates to
// rationals with denominator <= max_denominator, runs the exact membership
// checks, and attempts the corresponding reconstruction. Throws
// WrongCategoryCount for any other category count.
AnalysisReport analyze(const EmpiricalRecord& r,
                       std::uint64_t max_denominator = kDefaultMaxDenominator);

}  // namespace bvc
