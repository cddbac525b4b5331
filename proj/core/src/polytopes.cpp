#include "bvc/polytopes.hpp"

#include <utility>

namespace bvc {

namespace {

InequalityReport make_report(std::vector<InequalityEntry> entries) {
  InequalityReport report;
  report.entries = std::move(entries);
  for (const auto& e : report.entries) {
    if (e.slack < 0) {
      report.satisfied = false;
      break;
    }
  }
  return report;
}

// slack of |u| <= v, i.e. v - |u|
Rational two_sided(const Rational& u, const Rational& v) {
  return Rational(v - abs(u));
}

}  // namespace

std::vector<InequalityEntry> InequalityReport::violations() const {
  std::vector<InequalityEntry> out;
  for (const auto& e : entries) {
    if (e.slack < 0) out.push_back(e);
  }
  return out;
}

InequalityReport tetrahedron_check(const CovarianceTriple& s) {
  return make_report({
      {"T1", Rational(1 + s.ab + s.ac + s.bc)},
      {"T2", Rational(1 + s.ab - s.ac - s.bc)},
      {"T3", Rational(1 - s.ab + s.ac - s.bc)},
      {"T4", Rational(1 - s.ab - s.ac + s.bc)},
  });
}

InequalityReport bell_six_check(const CovarianceTriple& s) {
  return make_report({
      {"B1", two_sided(Rational(s.ab - s.ac), Rational(1 - s.bc))},
      {"B2", two_sided(Rational(s.ab + s.ac), Rational(1 + s.bc))},
      {"B3", two_sided(Rational(s.ab - s.bc), Rational(1 - s.ac))},
      {"B4", two_sided(Rational(s.ab + s.bc), Rational(1 + s.ac))},
      {"B5", two_sided(Rational(s.ac - s.bc), Rational(1 - s.ab))},
      {"B6", two_sided(Rational(s.ac + s.bc), Rational(1 + s.ab))},
  });
}

bool CovarianceQuad::in_cube() const {
  return abs(a1b1) <= 1 && abs(a1b2) <= 1 && abs(a2b1) <= 1 && abs(a2b2) <= 1;
}

InequalityReport chsh_check(const CovarianceQuad& s) {
  auto band = [&](const Rational& signed_sum) {
    return two_sided(signed_sum, Rational(2));
  };
  return make_report({
      {"C1", band(Rational(s.a1b1 + s.a1b2 + s.a2b1 - s.a2b2))},
      {"C2", band(Rational(s.a1b1 + s.a1b2 - s.a2b1 + s.a2b2))},
      {"C3", band(Rational(s.a1b1 - s.a1b2 + s.a2b1 + s.a2b2))},
      {"C4", band(Rational(-s.a1b1 + s.a1b2 + s.a2b1 + s.a2b2))},
      {"cube:1", two_sided(s.a1b1, Rational(1))},
      {"cube:2", two_sided(s.a1b2, Rational(1))},
      {"cube:3", two_sided(s.a2b1, Rational(1))},
      {"cube:4", two_sided(s.a2b2, Rational(1))},
  });
}

}  // namespace bvc
