#pragma once

#include "bvc/densities.hpp"

#include <string>
#include <vector>

namespace bvc {

struct InequalityEntry {
  std::string id;   // stable identifier: "T1".."T4", "B1".."B6", "C1".."C4", "cube:1".."cube:4"
  Rational slack;   // nonnegative iff the inequality holds

  bool operator==(const InequalityEntry&) const = default;
};

// Evaluation of a fixed inequality family at one point. `entries` holds
// every inequality of the family with its exact slack, in family order.
struct InequalityReport {
  std::vector<InequalityEntry> entries;
  bool satisfied = true;

  // The negative-slack subset of `entries`, in the same order.
  std::vector<InequalityEntry> violations() const;
};

// The four facets of the covariance tetrahedron:
//   T1: 1 + ab + ac + bc >= 0        T2: 1 + ab - ac - bc >= 0
//   T3: 1 - ab + ac - bc >= 0        T4: 1 - ab - ac + bc >= 0
// Membership is equivalent to realizability of the three pair densities on
// one probability space.
InequalityReport tetrahedron_check(const CovarianceTriple& s);

// The six two-sided inequalities |si +- sj| <= 1 -+ sk over the three index
// pairings; slack is (right side) - (left side). Equivalent to
// tetrahedron_check on every input.
InequalityReport bell_six_check(const CovarianceTriple& s);

// Covariances of the four measured setting pairs (A1B1, A1B2, A2B1, A2B2)
// in a two-settings-per-side experiment. The intra-side pairs are never
// measured jointly and carry no constraint.
struct CovarianceQuad {
  Rational a1b1, a1b2, a2b1, a2b2;

  bool in_cube() const;

  bool operator==(const CovarianceQuad&) const = default;
};

// The four |sum with one sign flipped| <= 2 facets (C1..C4, flip on a2b2,
// a2b1, a1b2, a1b1 respectively) together with the cube bounds
// |s| <= 1 ("cube:1".."cube:4" in field order). Out-of-cube inputs are
// reported as cube violations, not errors.
InequalityReport chsh_check(const CovarianceQuad& s);

}  // namespace bvc
