#pragma once

#include "bvc/rational.hpp"

namespace bvc {

// Probability density supported on the four vertices of the square, stored
// in the fixed order (+1,+1), (+1,-1), (-1,+1), (-1,-1). Serialization and
// every table in the toolkit use this vertex order.
struct PairDensity {
  Rational pp, pm, mp, mm;

  // x, y in {+1, -1}
  const Rational& at(int x, int y) const;

  bool operator==(const PairDensity&) const = default;
};

// Validated constructor: masses nonnegative, summing to exactly 1.
// Throws NegativeMass or MassSumNotOne (which carries the exact deficit).
// Uniform marginals are NOT required here; operations that need them check
// explicitly.
PairDensity make_pair_density(const Rational& pp, const Rational& pm,
                              const Rational& mp, const Rational& mm);

// True iff both vertex-row sums equal 1/2, i.e. both coordinate means
// vanish and the density is determined by its covariance alone.
bool has_uniform_marginals(const PairDensity& d);

// E[XY] = pp - pm - mp + mm, exact.
Rational covariance(const PairDensity& d);

// The unique uniform-marginal density with the given covariance:
// ((1+s)/4, (1-s)/4, (1-s)/4, (1+s)/4). Throws CovarianceOutOfRange
// unless |s| <= 1.
PairDensity density_from_covariance(const Rational& sigma);

// Pairwise covariances (E[AB], E[AC], E[BC]) of a three-variable,
// two-settings-per-station experiment. Checks accept any rational values so
// that noisy empirical estimates still produce diagnostics; operations whose
// contract needs the cube validate explicitly.
struct CovarianceTriple {
  Rational ab, ac, bc;

  bool in_cube() const;

  bool operator==(const CovarianceTriple&) const = default;
};

}  // namespace bvc
