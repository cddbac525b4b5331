#pragma once

#include "bvc/densities.hpp"
#include "bvc/polytopes.hpp"
#include "bvc/simplex.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bvc {

// Joint density on {+1,-1}^3. Atoms are ordered lexicographically with +1
// before -1: (+,+,+), (+,+,-), (+,-,+), ..., (-,-,-).
struct JointDensity3 {
  std::array<Rational, 8> p{};

  static std::size_t index(int x, int y, int z);
  static std::array<int, 3> outcome(std::size_t index);
  const Rational& at(int x, int y, int z) const;

  bool operator==(const JointDensity3&) const = default;
};

// Joint density on {+1,-1}^4 for (A1, A2, B1, B2), same atom ordering rule.
struct JointDensity4 {
  std::array<Rational, 16> p{};

  static std::size_t index(int a1, int a2, int b1, int b2);
  static std::array<int, 4> outcome(std::size_t index);

  bool operator==(const JointDensity4&) const = default;
};

struct Infeasible3 {
  InequalityReport tetrahedron;  // carries the violated facets
};

// Closed-form reconstruction
//   p(x,y,z) = (1 + ab xy + ac xz + bc yz + t xyz) / 8.
// Returns the witness when the triple lies in the covariance tetrahedron;
// its three pair marginals equal the uniform-marginal densities for ab, ac,
// bc exactly, for every feasible t. Returns Infeasible3 when the
// tetrahedron is violated. Throws ParameterOutOfRange if the triple is
// feasible but t lies outside feasible_t_interval(s).
std::variant<JointDensity3, Infeasible3> reconstruct_joint(
    const CovarianceTriple& s, const Rational& t);

struct RationalInterval {
  Rational lo, hi;

  bool contains(const Rational& t) const { return lo <= t && t <= hi; }
  bool operator==(const RationalInterval&) const = default;
};

// The exact interval of t for which every entry of the closed form is
// nonnegative; empty iff the tetrahedron is violated. The interval always
// contains 0 when nonempty.
std::optional<RationalInterval> feasible_t_interval(const CovarianceTriple& s);

enum class VariablePair { AB, AC, BC };

// Sums out the remaining coordinate; exact.
PairDensity joint_pair_marginal(const JointDensity3& j, VariablePair pair);

// The 16-unknown feasibility system for a two-settings-per-side experiment:
// uniform single-variable marginals, the four measured pair covariances,
// and total mass one. Row labels are stable and appear in certificates.
struct ChshSystem {
  LinearSystem system;
  std::vector<std::string> row_ids;  // "mass", "mean:A1", ..., "cov:A2B2"
};

ChshSystem build_chsh_system(const CovarianceQuad& s);

struct InfeasibleChsh {
  std::vector<Rational> certificate;  // aligned with ChshSystem::row_ids
};

// Exact LP feasibility for the four prescribed covariances; no constraint
// on the unmeasured intra-side pairs. Agrees with chsh_check on every
// input. Witnesses have uniform single-variable marginals.
std::variant<JointDensity4, InfeasibleChsh> chsh_reconstruct(
    const CovarianceQuad& s);

}  // namespace bvc
