#pragma once

#include "bvc/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace bvc {

// Dense exact-rational system  A x = b  with  x >= 0.
struct LinearSystem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> coeffs;  // row-major, rows * cols entries
  std::vector<Rational> rhs;     // rows entries

  LinearSystem() = default;
  LinearSystem(std::size_t rows_, std::size_t cols_);

  Rational& at(std::size_t r, std::size_t c);
  const Rational& at(std::size_t r, std::size_t c) const;
};

// Exactly one of the two members is populated.
//  - solution: x >= 0 with A x = b, one entry per column;
//  - certificate: y with sum_i y_i A(i,j) >= 0 for every column j and
//    y . b < 0, i.e. a Farkas proof that no nonnegative solution exists.
struct FeasibilityOutcome {
  std::optional<std::vector<Rational>> solution;
  std::optional<std::vector<Rational>> certificate;

  bool feasible() const { return solution.has_value(); }
};

// Phase-1 simplex over exact rationals with Bland's rule: entering column
// of smallest index among negative reduced costs, leaving row breaking
// ratio ties toward the smallest basic index. Cycle-free and fully
// deterministic; no floating point anywhere. Every returned solution and
// certificate is re-checked against the input system before this returns.
FeasibilityOutcome solve_nonnegative(const LinearSystem& sys);

// Pure arithmetic check of the Farkas conditions above; never solves.
bool check_farkas_certificate(const LinearSystem& sys,
                              const std::vector<Rational>& y);

}  // namespace bvc
