#include "bvc/sim.hpp"

#include "bvc/errors.hpp"
#include "bvc/json_io.hpp"
#include "bvc/philox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <thread>
#include <utility>

namespace bvc {

namespace {

// Cumulative u64 thresholds for exact rational weights: cell k catches
// u < floor(cum_k * 2^64), the last cell the remainder. Bias per cell is
// below 2^-63 and the table is a pure function of the weights, so sampling
// stays deterministic.
std::vector<std::uint64_t> cumulative_thresholds(
    const std::vector<Rational>& weights) {
  std::vector<std::uint64_t> th;
  Rational cum = 0;
  for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
    cum += weights[k];
    BigInt scaled = (numerator(cum) << 64) / denominator(cum);
    if (scaled > BigInt(std::numeric_limits<std::uint64_t>::max())) {
      th.push_back(std::numeric_limits<std::uint64_t>::max());
    } else {
      th.push_back(scaled.convert_to<std::uint64_t>());
    }
  }
  return th;
}

std::size_t pick_cell(const std::vector<std::uint64_t>& thresholds,
                      std::uint64_t u) {
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    if (u < thresholds[k]) return k;
  }
  return thresholds.size();
}

const std::vector<int>& response_table(
    const std::map<std::string, std::vector<int>>& responses,
    const std::string& setting, int station, std::size_t alphabet_size) {
  auto it = responses.find(setting);
  if (it == responses.end()) {
    throw InvalidModel("no response table for setting \"" + setting +
                       "\" at station " + std::to_string(station));
  }
  if (it->second.size() != alphabet_size) {
    throw InvalidModel("response table for setting \"" + setting +
                       "\" has " + std::to_string(it->second.size()) +
                       " entries for an alphabet of " +
                       std::to_string(alphabet_size));
  }
  for (int v : it->second) {
    if (v != 1 && v != -1) {
      throw InvalidModel("response for setting \"" + setting +
                         "\" contains " + std::to_string(v));
    }
  }
  return it->second;
}

void validate_weights(const std::vector<Rational>& weights) {
  if (weights.empty()) {
    throw InvalidModel("source alphabet is empty");
  }
  Rational total = 0;
  for (const auto& w : weights) {
    if (w < 0) throw InvalidModel("negative source weight " + w.str());
    total += w;
  }
  if (total != 1) {
    throw InvalidModel("source weights sum to " + total.str() + ", not 1");
  }
}

double threshold_for(const std::map<std::string, double>& thresholds,
                     const std::string& setting, int station) {
  auto it = thresholds.find(setting);
  if (it == thresholds.end()) {
    throw InvalidModel("no threshold for setting \"" + setting +
                       "\" at station " + std::to_string(station));
  }
  if (!std::isfinite(it->second)) {
    throw InvalidModel("threshold for setting \"" + setting +
                       "\" is not finite");
  }
  return it->second;
}

// Per-category trial evaluator: (u, v) from the counter RNG to a pair of
// +-1 outcomes. The two draws cover every model class; v is spare.
struct CategorySampler {
  std::vector<std::uint64_t> thresholds;
  // finite source
  const std::vector<int>* table1 = nullptr;
  const std::vector<int>* table2 = nullptr;
  // continuous source
  double angle1 = 0.0, angle2 = 0.0;
  bool continuous = false;
  // time slot: thresholds index the cells (pp, pm, mp, mm) directly
  bool cellwise = false;

  std::pair<int, int> operator()(std::uint64_t u, std::uint64_t) const {
    if (cellwise) {
      switch (pick_cell(thresholds, u)) {
        case 0: return {1, 1};
        case 1: return {1, -1};
        case 2: return {-1, 1};
        default: return {-1, -1};
      }
    }
    if (continuous) {
      double lambda = 2.0 * std::numbers::pi * to_unit_double(u);
      int o1 = std::cos(lambda - angle1) >= 0.0 ? 1 : -1;
      int o2 = std::cos(lambda - angle2) >= 0.0 ? 1 : -1;
      return {o1, o2};
    }
    std::size_t lambda = pick_cell(thresholds, u);
    return {(*table1)[lambda], (*table2)[lambda]};
  }
};

struct ModelSetup {
  std::string kind;
  std::vector<CategorySampler> samplers;            // one per plan category
  std::vector<std::optional<TimeSlot>> slots;       // one per plan category
};

ModelSetup prepare(const FiniteSourceModel& m, const ExperimentPlan& plan) {
  validate_weights(m.lambda_weights);
  ModelSetup setup;
  setup.kind = "source_finite";
  auto thresholds = cumulative_thresholds(m.lambda_weights);
  for (const auto& [s1, s2] : plan.categories) {
    CategorySampler sampler;
    sampler.thresholds = thresholds;
    sampler.table1 =
        &response_table(m.responses_station1, s1, 1, m.lambda_weights.size());
    sampler.table2 =
        &response_table(m.responses_station2, s2, 2, m.lambda_weights.size());
    setup.samplers.push_back(std::move(sampler));
    setup.slots.emplace_back();
  }
  return setup;
}

ModelSetup prepare(const ContinuousSourceModel& m, const ExperimentPlan& plan) {
  ModelSetup setup;
  setup.kind = "source_continuous";
  for (const auto& [s1, s2] : plan.categories) {
    CategorySampler sampler;
    sampler.continuous = true;
    sampler.angle1 = threshold_for(m.thresholds_station1, s1, 1);
    sampler.angle2 = threshold_for(m.thresholds_station2, s2, 2);
    setup.samplers.push_back(std::move(sampler));
    setup.slots.emplace_back();
  }
  return setup;
}

ModelSetup prepare(const TimeSlotModel& m, const ExperimentPlan& plan) {
  if (m.category_densities.size() < plan.categories.size()) {
    throw UnscheduledCategory(
        "plan has " + std::to_string(plan.categories.size()) +
        " categories but only " + std::to_string(m.category_densities.size()) +
        " slot densities are configured");
  }
  if (m.category_densities.size() > plan.categories.size()) {
    throw InvalidModel("more slot densities than plan categories");
  }
  if (!(m.min_slot_length > 0)) {
    throw InvalidModel("minimum slot length must be positive");
  }
  std::vector<TimeSlot> slots;
  if (m.slots) {
    if (m.slots->size() < plan.categories.size()) {
      throw UnscheduledCategory("plan category without a time slot");
    }
    if (m.slots->size() > plan.categories.size()) {
      throw InvalidModel("more time slots than plan categories");
    }
    slots = *m.slots;
    for (const auto& slot : slots) {
      if (!(slot.length() >= m.min_slot_length)) {
        throw InvalidModel("time slot shorter than the minimum length");
      }
    }
    auto sorted = slots;
    std::sort(sorted.begin(), sorted.end(),
              [](const TimeSlot& a, const TimeSlot& b) {
                return a.start < b.start;
              });
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      if (sorted[i + 1].start < sorted[i].end) {
        throw InvalidModel("time slots overlap");
      }
    }
  } else {
    for (std::size_t i = 0; i < plan.categories.size(); ++i) {
      double L = m.min_slot_length;
      slots.push_back(TimeSlot{i * L, (i + 1) * L});
    }
  }

  ModelSetup setup;
  setup.kind = "time_slot";
  for (std::size_t c = 0; c < plan.categories.size(); ++c) {
    const PairDensity& g = m.category_densities[c];
    // revalidates mass positivity and total
    make_pair_density(g.pp, g.pm, g.mp, g.mm);
    CategorySampler sampler;
    sampler.cellwise = true;
    sampler.thresholds = cumulative_thresholds({g.pp, g.pm, g.mp, g.mm});
    setup.samplers.push_back(std::move(sampler));
    setup.slots.emplace_back(slots[c]);
  }
  return setup;
}

struct Tally4 {
  std::uint64_t pp = 0, pm = 0, mp = 0, mm = 0;
};

void count(Tally4& t, int o1, int o2) {
  if (o1 == 1) {
    (o2 == 1 ? t.pp : t.pm) += 1;
  } else {
    (o2 == 1 ? t.mp : t.mm) += 1;
  }
}

}  // namespace

void validate_plan(const ExperimentPlan& plan) {
  std::set<std::string> names;
  for (const auto& s : plan.settings) {
    if (s.name.empty()) throw InvalidModel("setting with empty name");
    if (!names.insert(s.name).second) {
      throw InvalidModel("duplicate setting \"" + s.name + "\"");
    }
    if (s.direction) {
      const auto& d = *s.direction;
      double norm = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
      if (!(std::abs(norm - 1.0) <= 1e-12)) {
        throw InvalidModel("direction of setting \"" + s.name +
                           "\" is not a unit vector");
      }
    }
  }
  if (plan.categories.empty()) {
    throw InvalidModel("plan has no categories");
  }
  for (const auto& [s1, s2] : plan.categories) {
    if (!names.count(s1) || !names.count(s2)) {
      throw InvalidModel("category (" + s1 + ", " + s2 +
                         ") uses an undeclared setting");
    }
  }
  if (plan.trials_per_category == 0) {
    throw InvalidModel("trials per category must be >= 1");
  }
}

Rational FiniteSourceModel::expected_covariance(
    const std::string& setting1, const std::string& setting2) const {
  validate_weights(lambda_weights);
  const auto& r1 =
      response_table(responses_station1, setting1, 1, lambda_weights.size());
  const auto& r2 =
      response_table(responses_station2, setting2, 2, lambda_weights.size());
  Rational sum = 0;
  for (std::size_t l = 0; l < lambda_weights.size(); ++l) {
    sum += lambda_weights[l] * (r1[l] * r2[l]);
  }
  return sum;
}

EmpiricalRecord run_experiment(const HiddenVariableModel& model,
                               const ExperimentPlan& plan, unsigned threads) {
  validate_plan(plan);
  ModelSetup setup =
      std::visit([&](const auto& m) { return prepare(m, plan); }, model);

  const std::size_t categories = plan.categories.size();
  const std::uint64_t trials = plan.trials_per_category;
  const CounterRng rng(plan.seed);

  // Each worker owns a contiguous index range of every category. Trial
  // (c, k) depends only on (seed, c, k), so the partition never shows in
  // the counts.
  unsigned workers = std::max(1u, threads);
  std::vector<std::vector<Tally4>> partial(
      workers, std::vector<Tally4>(categories));
  auto work = [&](unsigned w) {
    std::uint64_t lo = trials * w / workers;
    std::uint64_t hi = trials * (w + 1) / workers;
    for (std::size_t c = 0; c < categories; ++c) {
      const CategorySampler& sampler = setup.samplers[c];
      Tally4& tally = partial[w][c];
      for (std::uint64_t k = lo; k < hi; ++k) {
        auto [u, v] = rng.draw(c, k);
        auto [o1, o2] = sampler(u, v);
        count(tally, o1, o2);
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  EmpiricalRecord record;
  record.trials_per_category = trials;
  record.seed = plan.seed;
  record.model_kind = setup.kind;
  record.model_hash = model_hash(model);
  for (std::size_t c = 0; c < categories; ++c) {
    CategoryTally tally;
    tally.setting1 = plan.categories[c].first;
    tally.setting2 = plan.categories[c].second;
    for (unsigned w = 0; w < workers; ++w) {
      tally.n_pp += partial[w][c].pp;
      tally.n_pm += partial[w][c].pm;
      tally.n_mp += partial[w][c].mp;
      tally.n_mm += partial[w][c].mm;
    }
    tally.slot = setup.slots[c];
    record.categories.push_back(std::move(tally));
  }
  return record;
}

std::vector<CovarianceEstimate> empirical_covariances(
    const EmpiricalRecord& r) {
  std::vector<CovarianceEstimate> out;
  for (const auto& c : r.categories) {
    std::uint64_t n = c.trials();
    if (n == 0) {
      throw EmptyCategory("category (" + c.setting1 + ", " + c.setting2 +
                          ") has no trials");
    }
    double num = static_cast<double>(c.n_pp) - static_cast<double>(c.n_pm) -
                 static_cast<double>(c.n_mp) + static_cast<double>(c.n_mm);
    CovarianceEstimate e;
    e.estimate = num / static_cast<double>(n);
    e.standard_error =
        std::sqrt((1.0 - e.estimate * e.estimate) / static_cast<double>(n));
    out.push_back(e);
  }
  return out;
}

namespace {

// root-sum-square of the standard errors feeding one inequality
double combined_se(const std::vector<CovarianceEstimate>& estimates,
                   const std::vector<std::size_t>& used) {
  double s = 0.0;
  for (std::size_t i : used) {
    s += estimates[i].standard_error * estimates[i].standard_error;
  }
  return std::sqrt(s);
}

void add_significance(AnalysisReport& report, const InequalityReport& ineqs,
                      const std::vector<std::size_t>& used_default) {
  for (const auto& e : ineqs.entries) {
    SignificanceEntry note;
    note.id = e.id;
    note.slack = e.slack;
    std::vector<std::size_t> used = used_default;
    // cube bounds touch a single covariance
    if (e.id.rfind("cube:", 0) == 0) {
      used = {static_cast<std::size_t>(e.id.back() - '1')};
    }
    note.combined_se = combined_se(report.estimates, used);
    note.significant =
        e.slack.convert_to<double>() < -kSignificanceBand * note.combined_se;
    report.significance.push_back(std::move(note));
  }
}

}  // namespace

AnalysisReport analyze(const EmpiricalRecord& r,
                       std::uint64_t max_denominator) {
  if (r.categories.size() != 3 && r.categories.size() != 4) {
    throw WrongCategoryCount("expected 3 or 4 categories, got " +
                             std::to_string(r.categories.size()));
  }
  AnalysisReport report;
  report.estimates = empirical_covariances(r);
  for (const auto& c : r.categories) {
    report.categories.emplace_back(c.setting1, c.setting2);
  }
  BigInt max_den(max_denominator);
  for (const auto& c : r.categories) {
    BigInt num = BigInt(c.n_pp) - BigInt(c.n_pm) - BigInt(c.n_mp) +
                 BigInt(c.n_mm);
    Rational exact(num, BigInt(c.trials()));
    report.rounded.push_back(round_to_denominator(exact, max_den));
  }

  if (r.categories.size() == 3) {
    CovarianceTriple s{report.rounded[0], report.rounded[1],
                       report.rounded[2]};
    report.tetrahedron = tetrahedron_check(s);
    report.bell = bell_six_check(s);
    auto joint = reconstruct_joint(s, Rational(0));
    if (auto* w = std::get_if<JointDensity3>(&joint)) {
      report.witness3 = *w;
      report.feasible = true;
    }
    if (report.feasible != report.tetrahedron->satisfied ||
        report.feasible != report.bell->satisfied) {
      throw Error("membership checks disagree with the reconstruction");
    }
    add_significance(report, *report.tetrahedron, {0, 1, 2});
    add_significance(report, *report.bell, {0, 1, 2});
  } else {
    CovarianceQuad s{report.rounded[0], report.rounded[1], report.rounded[2],
                     report.rounded[3]};
    report.chsh = chsh_check(s);
    report.chsh_row_ids = build_chsh_system(s).row_ids;
    auto joint = chsh_reconstruct(s);
    if (auto* w = std::get_if<JointDensity4>(&joint)) {
      report.witness4 = *w;
      report.feasible = true;
    } else {
      report.chsh_certificate = std::get<InfeasibleChsh>(joint).certificate;
    }
    if (report.feasible != report.chsh->satisfied) {
      throw Error("membership checks disagree with the reconstruction");
    }
    add_significance(report, *report.chsh, {0, 1, 2, 3});
  }
  return report;
}

}  // namespace bvc
