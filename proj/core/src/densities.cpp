#include "bvc/densities.hpp"

#include "bvc/errors.hpp"

namespace bvc {

namespace {

const Rational kHalf(1, 2);

}  // namespace

MassSumNotOne::MassSumNotOne(const Rational& deficit_)
    : Error("masses sum to 1 - (" + deficit_.str() + "), not 1"),
      deficit(deficit_) {}

const Rational& PairDensity::at(int x, int y) const {
  if (x == 1) return y == 1 ? pp : pm;
  return y == 1 ? mp : mm;
}

PairDensity make_pair_density(const Rational& pp, const Rational& pm,
                              const Rational& mp, const Rational& mm) {
  for (const Rational* m : {&pp, &pm, &mp, &mm}) {
    if (*m < 0) {
      throw NegativeMass("negative mass " + m->str());
    }
  }
  Rational deficit = 1 - Rational(pp + pm + mp + mm);
  if (deficit != 0) {
    throw MassSumNotOne(deficit);
  }
  return PairDensity{pp, pm, mp, mm};
}

bool has_uniform_marginals(const PairDensity& d) {
  return Rational(d.pp + d.pm) == kHalf && Rational(d.pp + d.mp) == kHalf;
}

Rational covariance(const PairDensity& d) {
  return Rational(d.pp - d.pm - d.mp + d.mm);
}

PairDensity density_from_covariance(const Rational& sigma) {
  if (abs(sigma) > 1) {
    throw CovarianceOutOfRange("covariance " + sigma.str() +
                               " outside [-1, 1]");
  }
  Rational plus((1 + sigma) / 4);
  Rational minus((1 - sigma) / 4);
  return PairDensity{plus, minus, minus, plus};
}

bool CovarianceTriple::in_cube() const {
  return abs(ab) <= 1 && abs(ac) <= 1 && abs(bc) <= 1;
}

}  // namespace bvc
