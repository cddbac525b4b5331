#include <doctest.h>

#include "bvc/polytopes.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>

using bvc::CovarianceQuad;
using bvc::CovarianceTriple;
using bvc::Rational;

namespace {

Rational q(long num, long den) { return Rational(bvc::BigInt(num), bvc::BigInt(den)); }

Rational slack_of(const bvc::InequalityReport& r, const std::string& id) {
  for (const auto& e : r.entries)
    if (e.id == id) return e.slack;
  REQUIRE(false);
  return Rational(0);
}

std::uint64_t mix(std::uint64_t v) {
  v ^= v >> 33;
  v *= 0xff51afd7ed558ccdULL;
  v ^= v >> 33;
  v *= 0xc4ceb9fe1a85ec53ULL;
  v ^= v >> 33;
  return v;
}

Rational random_rational(std::uint64_t& state, long span_num, long den) {
  state = mix(state);
  const long num = static_cast<long>(state % (2 * span_num + 1)) - span_num;
  return q(num, den);
}

}  // namespace

TEST_CASE("tetrahedron facets at the anticorrelated loop point") {
  const auto r = bvc::tetrahedron_check({q(1, 2), q(1, 2), q(-1, 2)});
  CHECK(slack_of(r, "T1") == q(3, 2));
  CHECK(slack_of(r, "T2") == q(3, 2));
  CHECK(slack_of(r, "T3") == q(3, 2));
  CHECK(slack_of(r, "T4") == q(-1, 2));
  CHECK_FALSE(r.satisfied);
  const auto v = r.violations();
  REQUIRE(v.size() == 1);
  CHECK(v[0].id == "T4");
}

TEST_CASE("tetrahedron facets at interior and vertex points") {
  const auto origin = bvc::tetrahedron_check({Rational(0), Rational(0), Rational(0)});
  CHECK(origin.satisfied);
  for (const auto& e : origin.entries) CHECK(e.slack == 1);

  const auto vertex = bvc::tetrahedron_check({Rational(1), Rational(1), Rational(1)});
  CHECK(vertex.satisfied);
  CHECK(slack_of(vertex, "T1") == 4);
  CHECK(slack_of(vertex, "T2") == 0);
  CHECK(slack_of(vertex, "T3") == 0);
  CHECK(slack_of(vertex, "T4") == 0);
}

TEST_CASE("two-sided family at reference points") {
  const auto r = bvc::bell_six_check({q(1, 2), q(1, 2), q(-1, 2)});
  CHECK_FALSE(r.satisfied);
  CHECK(slack_of(r, "B1") == q(3, 2));
  CHECK(slack_of(r, "B2") == q(-1, 2));
  CHECK(slack_of(r, "B3") == q(-1, 2));
  CHECK(slack_of(r, "B4") == q(3, 2));
  CHECK(slack_of(r, "B5") == q(-1, 2));
  CHECK(slack_of(r, "B6") == q(3, 2));

  const auto origin = bvc::bell_six_check({Rational(0), Rational(0), Rational(0)});
  CHECK(origin.satisfied);
  for (const auto& e : origin.entries) CHECK(e.slack == 1);
}

TEST_CASE("each two-sided slack is the smaller of two facet slacks") {
  // |ab - ac| <= 1 - bc unfolds into T2 >= 0 and T3 >= 0, and so on; the
  // pairing covers all six ways of choosing two facets.
  const std::map<std::string, std::pair<std::string, std::string>> pairing = {
      {"B1", {"T2", "T3"}}, {"B2", {"T1", "T4"}}, {"B3", {"T2", "T4"}},
      {"B4", {"T1", "T3"}}, {"B5", {"T3", "T4"}}, {"B6", {"T1", "T2"}}};

  std::uint64_t state = 99;
  for (int trial = 0; trial < 500; ++trial) {
    // Deliberately ranges past the cube: the identity is algebraic.
    const CovarianceTriple s{random_rational(state, 24, 16),
                             random_rational(state, 24, 16),
                             random_rational(state, 24, 16)};
    const auto tetra = bvc::tetrahedron_check(s);
    const auto bell = bvc::bell_six_check(s);
    for (const auto& [b_id, t_ids] : pairing) {
      const Rational expected =
          std::min(slack_of(tetra, t_ids.first), slack_of(tetra, t_ids.second));
      CHECK(slack_of(bell, b_id) == expected);
    }
    CHECK(tetra.satisfied == bell.satisfied);
  }
}

TEST_CASE("tetrahedron vertices have one slack 4 and three slacks 0") {
  const CovarianceTriple vertices[] = {
      {Rational(1), Rational(1), Rational(1)},
      {Rational(1), Rational(-1), Rational(-1)},
      {Rational(-1), Rational(1), Rational(-1)},
      {Rational(-1), Rational(-1), Rational(1)}};
  for (const auto& v : vertices) {
    const auto r = bvc::tetrahedron_check(v);
    CHECK(r.satisfied);
    int fours = 0, zeros = 0;
    for (const auto& e : r.entries) {
      if (e.slack == 4) ++fours;
      if (e.slack == 0) ++zeros;
    }
    CHECK(fours == 1);
    CHECK(zeros == 3);
  }
}

namespace {

std::multiset<Rational> slack_multiset(const bvc::InequalityReport& r) {
  std::multiset<Rational> out;
  for (const auto& e : r.entries) out.insert(e.slack);
  return out;
}

}  // namespace

TEST_CASE("tetrahedron respects its symmetry group") {
  // Permuting the three covariances or flipping the sign of exactly two of
  // them permutes the facets among themselves.
  std::uint64_t state = 2024;
  for (int trial = 0; trial < 200; ++trial) {
    const Rational a = random_rational(state, 20, 16);
    const Rational b = random_rational(state, 20, 16);
    const Rational c = random_rational(state, 20, 16);
    const auto base = bvc::tetrahedron_check({a, b, c});
    const auto slacks = slack_multiset(base);

    const CovarianceTriple permuted[] = {
        {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}};
    for (const auto& p : permuted) {
      const auto r = bvc::tetrahedron_check(p);
      CHECK(slack_multiset(r) == slacks);
      CHECK(r.satisfied == base.satisfied);
    }
    const CovarianceTriple flipped[] = {
        {Rational(-a), Rational(-b), c},
        {Rational(-a), b, Rational(-c)},
        {a, Rational(-b), Rational(-c)}};
    for (const auto& f : flipped) {
      const auto r = bvc::tetrahedron_check(f);
      CHECK(slack_multiset(r) == slacks);
      CHECK(r.satisfied == base.satisfied);
    }
  }
}

TEST_CASE("both triple families agree on the 27 sign patterns") {
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      for (int c = -1; c <= 1; ++c) {
        const CovarianceTriple s{Rational(a), Rational(b), Rational(c)};
        CHECK(bvc::tetrahedron_check(s).satisfied ==
              bvc::bell_six_check(s).satisfied);
      }
}

TEST_CASE("quad facets at reference points") {
  const auto hard = bvc::chsh_check({Rational(1), Rational(1), Rational(1), Rational(-1)});
  CHECK_FALSE(hard.satisfied);
  CHECK(slack_of(hard, "C1") == -2);
  CHECK(slack_of(hard, "C2") == 2);
  CHECK(slack_of(hard, "C3") == 2);
  CHECK(slack_of(hard, "C4") == 2);
  for (int i = 1; i <= 4; ++i)
    CHECK(slack_of(hard, "cube:" + std::to_string(i)) == 0);
  const auto v = hard.violations();
  REQUIRE(v.size() == 1);
  CHECK(v[0].id == "C1");

  const auto boundary =
      bvc::chsh_check({q(1, 2), q(1, 2), q(1, 2), q(-1, 2)});
  CHECK(boundary.satisfied);
  CHECK(slack_of(boundary, "C1") == 0);
  CHECK(slack_of(boundary, "C2") == 2);

  const auto origin = bvc::chsh_check({Rational(0), Rational(0), Rational(0), Rational(0)});
  CHECK(origin.satisfied);
  for (int i = 1; i <= 4; ++i) {
    CHECK(slack_of(origin, "C" + std::to_string(i)) == 2);
    CHECK(slack_of(origin, "cube:" + std::to_string(i)) == 1);
  }
}

TEST_CASE("cube bounds are reported separately from the sum facets") {
  // The sum facets alone accept this point; only the cube bound rejects it.
  const auto r = bvc::chsh_check({q(3, 2), Rational(0), Rational(0), Rational(0)});
  CHECK_FALSE(r.satisfied);
  CHECK(slack_of(r, "C1") == q(1, 2));
  CHECK(slack_of(r, "C2") == q(1, 2));
  CHECK(slack_of(r, "C3") == q(1, 2));
  CHECK(slack_of(r, "C4") == q(1, 2));
  CHECK(slack_of(r, "cube:1") == q(-1, 2));
  CHECK(slack_of(r, "cube:2") == 1);
}

TEST_CASE("quad facets at the strongest rational test point") {
  // 707107/1000000 approximates the extremal quantum correlation; all four
  // covariances at that strength with one sign flipped overshoot C1 by
  // 4 * 707107/1000000 - 2.
  const Rational s = q(707'107, 1'000'000);
  const auto r = bvc::chsh_check({s, s, s, Rational(-s)});
  CHECK_FALSE(r.satisfied);
  CHECK(slack_of(r, "C1") == q(-207'107, 250'000));
  // The other three signed sums cancel exactly at this symmetric point.
  CHECK(slack_of(r, "C2") == 2);
  CHECK(slack_of(r, "C3") == 2);
  CHECK(slack_of(r, "C4") == 2);
}
