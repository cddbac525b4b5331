// Command-line front end: polytope membership checks, exact feasibility of
// marginal complexes with Farkas certificates, and the Monte Carlo
// experiment harness. Exit codes: 0 feasible/satisfied, 1 infeasible or
// violated (with a report), 2 invalid input, 3 internal limit or failed
// internal consistency check.

#include "bvc/densities.hpp"
#include "bvc/errors.hpp"
#include "bvc/json_io.hpp"
#include "bvc/marginal_complex.hpp"
#include "bvc/polytopes.hpp"
#include "bvc/reconstruct.hpp"
#include "bvc/sim.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <typeinfo>
#include <vector>

namespace {

using bvc::Json;
using bvc::Rational;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw bvc::ParseError("cannot read \"" + path + "\"");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<Rational> split_rationals(const std::string& text) {
  std::vector<Rational> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string part = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    out.push_back(bvc::parse_rational(part));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<Rational> covariance_list(const Json& j, std::size_t count) {
  std::vector<Rational> values;
  for (const auto& v : j) {
    if (!v.is_string()) {
      throw bvc::ParseError("covariances must be \"p/q\" strings");
    }
    values.push_back(bvc::parse_rational(v.get<std::string>()));
  }
  if (values.size() != count) {
    throw bvc::ParseError("expected " + std::to_string(count) +
                          " covariances, got " +
                          std::to_string(values.size()));
  }
  return values;
}

// Inline "s1,s2,s3", or a JSON file holding either {"covariances": [...]}
// or the three pair densities {"ab": ..., "ac": ..., "bc": ...}. Densities
// must have uniform marginals; only then is each determined by its
// covariance and the membership question well-posed.
bvc::CovarianceTriple parse_check_input(const std::string& arg) {
  if (arg.find(',') != std::string::npos) {
    auto values = split_rationals(arg);
    if (values.size() != 3) {
      throw bvc::ParseError("expected three comma-separated covariances");
    }
    return {values[0], values[1], values[2]};
  }
  Json j = bvc::parse_json_text(read_file(arg), arg);
  if (j.contains("covariances")) {
    auto values = covariance_list(j["covariances"], 3);
    return {values[0], values[1], values[2]};
  }
  bvc::CovarianceTriple s;
  Rational* slots[3] = {&s.ab, &s.ac, &s.bc};
  const char* keys[3] = {"ab", "ac", "bc"};
  for (int i = 0; i < 3; ++i) {
    if (!j.contains(keys[i])) {
      throw bvc::ParseError(arg + ": missing pair density \"" +
                            std::string(keys[i]) + "\"");
    }
    bvc::PairDensity d = bvc::pair_density_from_json(j[keys[i]]);
    if (!bvc::has_uniform_marginals(d)) {
      throw bvc::ParseError("pair density \"" + std::string(keys[i]) +
                            "\" does not have uniform marginals");
    }
    *slots[i] = bvc::covariance(d);
  }
  return s;
}

bvc::CovarianceQuad parse_chsh_input(const std::string& arg) {
  std::vector<Rational> values;
  if (arg.find(',') != std::string::npos) {
    values = split_rationals(arg);
    if (values.size() != 4) {
      throw bvc::ParseError("expected four comma-separated covariances");
    }
  } else {
    Json j = bvc::parse_json_text(read_file(arg), arg);
    values = covariance_list(
        j.contains("covariances") ? j["covariances"] : j, 4);
  }
  return {values[0], values[1], values[2], values[3]};
}

// The three-pair complex over A, B, C used for the LP leg of `check`.
bvc::MarginalComplex complex_for(const bvc::CovarianceTriple& s) {
  bvc::MarginalComplex c;
  for (const char* name : {"A", "B", "C"}) {
    c.variables.push_back(bvc::Variable{name, {1, -1}});
  }
  const std::pair<std::pair<int, int>, Rational> layout[3] = {
      {{0, 1}, s.ab}, {{0, 2}, s.ac}, {{1, 2}, s.bc}};
  for (const auto& [vars, sigma] : layout) {
    bvc::PairDensity d = bvc::density_from_covariance(sigma);
    bvc::MarginalConstraint constraint;
    constraint.over = {c.variables[vars.first].name,
                       c.variables[vars.second].name};
    constraint.table[{1, 1}] = d.pp;
    constraint.table[{1, -1}] = d.pm;
    constraint.table[{-1, 1}] = d.mp;
    constraint.table[{-1, -1}] = d.mm;
    c.constraints.push_back(std::move(constraint));
  }
  return c;
}

void print_inequalities(const bvc::InequalityReport& report) {
  for (const auto& e : report.entries) {
    std::printf("  %-7s slack %s\n", e.id.c_str(), e.slack.str().c_str());
  }
}

std::vector<std::string> zero_slack_ids(const bvc::InequalityReport& report) {
  std::vector<std::string> out;
  for (const auto& e : report.entries) {
    if (e.slack == 0) out.push_back(e.id);
  }
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out;
}

int internal_failure(const std::string& message) {
  std::fprintf(stderr, "internal consistency failure: %s\n", message.c_str());
  return 3;
}

int cmd_check(const std::string& input, bool json, bool skip_lp) {
  bvc::CovarianceTriple s = parse_check_input(input);
  bvc::InequalityReport tetra = bvc::tetrahedron_check(s);
  bvc::InequalityReport bell = bvc::bell_six_check(s);
  if (tetra.satisfied != bell.satisfied) {
    return internal_failure("tetrahedron and two-sided checks disagree");
  }

  std::optional<bvc::ComplexSolution> lp;
  if (!skip_lp && s.in_cube()) {
    lp = bvc::solve_complex(complex_for(s));
    if (lp->feasible() != tetra.satisfied) {
      return internal_failure("inequality checks disagree with the solver");
    }
  }

  auto interval = bvc::feasible_t_interval(s);
  std::optional<bvc::JointDensity3> witness;
  if (interval) {
    witness = std::get<bvc::JointDensity3>(bvc::reconstruct_joint(s, 0));
  }
  if (interval.has_value() != tetra.satisfied) {
    return internal_failure("t-interval disagrees with the facet slacks");
  }

  if (json) {
    Json out;
    out["covariances"] = Json::array({bvc::to_string(s.ab),
                                      bvc::to_string(s.ac),
                                      bvc::to_string(s.bc)});
    Json ineqs = Json::array();
    for (const auto& e : bvc::to_json(tetra)) ineqs.push_back(e);
    for (const auto& e : bvc::to_json(bell)) ineqs.push_back(e);
    out["inequalities"] = std::move(ineqs);
    out["feasible"] = tetra.satisfied;
    auto boundary = zero_slack_ids(tetra);
    for (auto& id : zero_slack_ids(bell)) boundary.push_back(id);
    if (!boundary.empty()) out["boundary"] = boundary;
    if (interval) {
      out["t_interval"] = Json{{"lo", bvc::to_string(interval->lo)},
                               {"hi", bvc::to_string(interval->hi)}};
      out["witness"] = bvc::to_json(*witness);
    }
    if (lp) out["lp"] = bvc::to_json(*lp);
    std::printf("%s\n", out.dump().c_str());
  } else {
    std::printf("covariances: ab = %s  ac = %s  bc = %s\n",
                s.ab.str().c_str(), s.ac.str().c_str(), s.bc.str().c_str());
    std::printf("tetrahedron facets:\n");
    print_inequalities(tetra);
    std::printf("two-sided inequalities:\n");
    print_inequalities(bell);
    if (tetra.satisfied) {
      std::printf("verdict: feasible%s\n",
                  lp ? " (solver witness confirmed)" : "");
      auto boundary = zero_slack_ids(tetra);
      if (!boundary.empty()) {
        std::printf("boundary: zero slack on %s\n", join(boundary).c_str());
      }
      std::printf("t interval: [%s, %s]\n", interval->lo.str().c_str(),
                  interval->hi.str().c_str());
      std::printf("witness at t = 0:\n");
      Json w = bvc::to_json(*witness);
      for (const auto& [atom, mass] : w.items()) {
        std::printf("  %-9s %s\n", atom.c_str(),
                    mass.get<std::string>().c_str());
      }
    } else {
      std::vector<std::string> ids;
      for (const auto& e : tetra.violations()) ids.push_back(e.id);
      for (const auto& e : bell.violations()) ids.push_back(e.id);
      std::printf("verdict: infeasible (violated: %s)\n", join(ids).c_str());
      if (lp && lp->certificate) {
        std::printf("solver certificate:\n");
        Json cert = bvc::to_json(*lp)["certificate"];
        for (const auto& [row, value] : cert.items()) {
          std::printf("  %-12s %s\n", row.c_str(),
                      value.get<std::string>().c_str());
        }
      }
    }
  }
  return tetra.satisfied ? 0 : 1;
}

int cmd_chsh(const std::string& input, bool json, bool skip_lp) {
  bvc::CovarianceQuad s = parse_chsh_input(input);
  bvc::InequalityReport report = bvc::chsh_check(s);

  std::optional<std::variant<bvc::JointDensity4, bvc::InfeasibleChsh>> lp;
  if (!skip_lp) {
    lp = bvc::chsh_reconstruct(s);
    bool lp_feasible = std::holds_alternative<bvc::JointDensity4>(*lp);
    if (lp_feasible != report.satisfied) {
      return internal_failure("inequality checks disagree with the solver");
    }
  }
  const auto row_ids = bvc::build_chsh_system(s).row_ids;

  if (json) {
    Json out;
    out["covariances"] =
        Json::array({bvc::to_string(s.a1b1), bvc::to_string(s.a1b2),
                     bvc::to_string(s.a2b1), bvc::to_string(s.a2b2)});
    out["inequalities"] = bvc::to_json(report);
    out["feasible"] = report.satisfied;
    auto boundary = zero_slack_ids(report);
    if (!boundary.empty()) out["boundary"] = boundary;
    if (lp) {
      if (auto* w = std::get_if<bvc::JointDensity4>(&*lp)) {
        out["witness"] = bvc::to_json(*w);
      } else {
        const auto& cert = std::get<bvc::InfeasibleChsh>(*lp).certificate;
        Json c = Json::object();
        for (std::size_t i = 0; i < cert.size(); ++i) {
          if (cert[i] != 0) c[row_ids[i]] = bvc::to_string(cert[i]);
        }
        out["certificate"] = std::move(c);
      }
    }
    std::printf("%s\n", out.dump().c_str());
  } else {
    std::printf("covariances: a1b1 = %s  a1b2 = %s  a2b1 = %s  a2b2 = %s\n",
                s.a1b1.str().c_str(), s.a1b2.str().c_str(),
                s.a2b1.str().c_str(), s.a2b2.str().c_str());
    print_inequalities(report);
    if (report.satisfied) {
      std::printf("verdict: feasible\n");
      auto boundary = zero_slack_ids(report);
      if (!boundary.empty()) {
        std::printf("boundary: zero slack on %s\n", join(boundary).c_str());
      }
      if (lp) {
        std::printf("witness:\n");
        Json w = bvc::to_json(std::get<bvc::JointDensity4>(*lp));
        for (const auto& [atom, mass] : w.items()) {
          std::printf("  %-11s %s\n", atom.c_str(),
                      mass.get<std::string>().c_str());
        }
      }
    } else {
      std::vector<std::string> ids;
      for (const auto& e : report.violations()) ids.push_back(e.id);
      std::printf("verdict: infeasible (violated: %s)\n", join(ids).c_str());
      if (lp) {
        std::printf("solver certificate:\n");
        const auto& cert = std::get<bvc::InfeasibleChsh>(*lp).certificate;
        for (std::size_t i = 0; i < cert.size(); ++i) {
          if (cert[i] != 0) {
            std::printf("  %-10s %s\n", row_ids[i].c_str(),
                        cert[i].str().c_str());
          }
        }
      }
    }
  }
  return report.satisfied ? 0 : 1;
}

int cmd_vorobev(const std::string& input, bool json, std::size_t atom_cap) {
  bvc::MarginalComplex complex =
      bvc::complex_from_json(bvc::parse_json_text(read_file(input), input));
  bvc::ComplexSolution solution = bvc::solve_complex(complex, atom_cap);
  if (solution.certificate &&
      !bvc::verify_certificate(complex, *solution.certificate, atom_cap)) {
    return internal_failure("solver certificate failed verification");
  }
  Json out = bvc::to_json(solution);
  if (json) {
    std::printf("%s\n", out.dump().c_str());
  } else {
    std::printf("verdict: %s\n",
                solution.feasible() ? "feasible" : "infeasible");
    std::printf("%s\n", out.dump(2).c_str());
  }
  return solution.feasible() ? 0 : 1;
}

int cmd_simulate(const std::string& model_path, const std::string& plan_path,
                 bool json, std::optional<std::uint64_t> seed,
                 std::optional<std::uint64_t> trials, unsigned threads,
                 std::uint64_t max_denominator) {
  bvc::HiddenVariableModel model = bvc::model_from_json(
      bvc::parse_json_text(read_file(model_path), model_path));
  bvc::ExperimentPlan plan = bvc::plan_from_json(
      bvc::parse_json_text(read_file(plan_path), plan_path));
  if (seed) plan.seed = *seed;
  if (trials) plan.trials_per_category = *trials;

  bvc::EmpiricalRecord record = bvc::run_experiment(model, plan, threads);
  bvc::AnalysisReport analysis = bvc::analyze(record, max_denominator);

  if (json) {
    Json out;
    out["record"] = bvc::to_json(record);
    out["analysis"] = bvc::to_json(analysis);
    std::printf("%s\n", out.dump().c_str());
  } else {
    std::printf("model: %s (hash %s)  seed: %llu  trials per category: %llu\n",
                record.model_kind.c_str(), record.model_hash.c_str(),
                static_cast<unsigned long long>(record.seed),
                static_cast<unsigned long long>(record.trials_per_category));
    for (std::size_t i = 0; i < record.categories.size(); ++i) {
      const auto& c = record.categories[i];
      const auto& e = analysis.estimates[i];
      std::printf(
          "category (%s, %s): pp=%llu pm=%llu mp=%llu mm=%llu  "
          "est %+.6f (se %.6f)  rounded %s",
          c.setting1.c_str(), c.setting2.c_str(),
          static_cast<unsigned long long>(c.n_pp),
          static_cast<unsigned long long>(c.n_pm),
          static_cast<unsigned long long>(c.n_mp),
          static_cast<unsigned long long>(c.n_mm), e.estimate,
          e.standard_error, analysis.rounded[i].str().c_str());
      if (c.slot) {
        std::printf("  slot [%g, %g)", c.slot->start, c.slot->end);
      }
      std::printf("\n");
    }
    std::printf("inequalities at the rounded covariances:\n");
    for (const auto& s : analysis.significance) {
      std::printf("  %-7s slack %-12s combined se %.6f%s\n", s.id.c_str(),
                  s.slack.str().c_str(), s.combined_se,
                  s.significant ? "  SIGNIFICANT" : "");
    }
    std::printf("verdict: %s\n", analysis.feasible ? "feasible" : "infeasible");
  }
  return analysis.feasible ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact consistency toolkit: covariance polytopes, marginal-complex "
      "feasibility, and a deterministic coincidence-experiment simulator"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "emit machine-readable JSON only");

  std::function<int()> action;

  // The flag reads naturally in either position: `--json check` and
  // `check --json` both bind the same switch.
  const auto add_json_flag = [&json](CLI::App* sub) {
    sub->add_flag("--json", json, "emit machine-readable JSON only");
  };

  auto* check = app.add_subcommand(
      "check", "three pairwise covariances against the realizability facets");
  std::string check_input;
  bool check_skip_lp = false;
  check->add_option("input", check_input,
                    "\"s1,s2,s3\" or a JSON file (covariances or pair "
                    "densities ab/ac/bc)")
      ->required();
  check->add_flag("--skip-lp", check_skip_lp,
                  "skip the independent solver leg of the self-test");
  add_json_flag(check);
  check->callback([&] {
    action = [&] { return cmd_check(check_input, json, check_skip_lp); };
  });

  auto* chsh = app.add_subcommand(
      "chsh", "four two-station covariances against the correlation polytope");
  std::string chsh_input;
  bool chsh_skip_lp = false;
  chsh->add_option("input", chsh_input,
                   "\"s11,s12,s21,s22\" or a JSON file with covariances")
      ->required();
  chsh->add_flag("--skip-lp", chsh_skip_lp,
                 "skip the independent solver leg of the self-test");
  add_json_flag(chsh);
  chsh->callback([&] {
    action = [&] { return cmd_chsh(chsh_input, json, chsh_skip_lp); };
  });

  auto* vorobev = app.add_subcommand(
      "vorobev", "exact feasibility of a general marginal complex");
  std::string vorobev_input;
  std::size_t atom_cap = bvc::kDefaultAtomCap;
  vorobev->add_option("input", vorobev_input, "MarginalComplex JSON file")
      ->required();
  vorobev->add_option("--atom-cap", atom_cap,
                      "largest admissible product-space size");
  add_json_flag(vorobev);
  vorobev->callback([&] {
    action = [&] { return cmd_vorobev(vorobev_input, json, atom_cap); };
  });

  auto* simulate = app.add_subcommand(
      "simulate", "run a configured experiment and analyze the tallies");
  std::string model_path, plan_path;
  std::optional<std::uint64_t> seed_override, trials_override;
  unsigned threads = 1;
  std::uint64_t max_denominator = bvc::kDefaultMaxDenominator;
  simulate->add_option("--model", model_path, "model configuration JSON")
      ->required();
  simulate->add_option("--plan", plan_path, "experiment plan JSON")
      ->required();
  simulate->add_option("--seed", seed_override, "override the plan seed");
  simulate->add_option("--trials", trials_override,
                       "override trials per category");
  simulate->add_option("--threads", threads, "worker threads (default 1)");
  simulate->add_option("--max-denominator", max_denominator,
                       "denominator bound when rounding estimates");
  add_json_flag(simulate);
  simulate->callback([&] {
    action = [&] {
      return cmd_simulate(model_path, plan_path, json, seed_override,
                          trials_override, threads, max_denominator);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return action();
  } catch (const bvc::ProductSpaceTooLarge& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const bvc::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    // Plain Error marks a failed internal invariant, not bad input.
    return typeid(e) == typeid(bvc::Error) ? 3 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
