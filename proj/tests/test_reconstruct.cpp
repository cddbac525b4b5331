#include <doctest.h>

#include "bvc/errors.hpp"
#include "bvc/marginal_complex.hpp"
#include "bvc/reconstruct.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

using bvc::CovarianceQuad;
using bvc::CovarianceTriple;
using bvc::JointDensity3;
using bvc::JointDensity4;
using bvc::Rational;

namespace {

Rational q(long num, long den) { return Rational(bvc::BigInt(num), bvc::BigInt(den)); }

std::uint64_t mix(std::uint64_t v) {
  v ^= v >> 33;
  v *= 0xff51afd7ed558ccdULL;
  v ^= v >> 33;
  v *= 0xc4ceb9fe1a85ec53ULL;
  v ^= v >> 33;
  return v;
}

Rational quad_mean(const JointDensity4& j, int which) {
  Rational acc(0);
  for (std::size_t i = 0; i < 16; ++i)
    acc += j.p[i] * JointDensity4::outcome(i)[which];
  return acc;
}

Rational quad_cov(const JointDensity4& j, int first, int second) {
  Rational acc(0);
  for (std::size_t i = 0; i < 16; ++i) {
    const auto o = JointDensity4::outcome(i);
    acc += j.p[i] * o[first] * o[second];
  }
  return acc;
}

}  // namespace

TEST_CASE("atom indexing round trips") {
  CHECK(JointDensity3::index(1, 1, 1) == 0);
  CHECK(JointDensity3::index(1, -1, -1) == 3);
  CHECK(JointDensity3::index(-1, -1, -1) == 7);
  for (std::size_t i = 0; i < 8; ++i) {
    const auto o = JointDensity3::outcome(i);
    CHECK(JointDensity3::index(o[0], o[1], o[2]) == i);
  }
  CHECK(JointDensity4::index(1, 1, 1, 1) == 0);
  CHECK(JointDensity4::index(-1, -1, -1, -1) == 15);
  for (std::size_t i = 0; i < 16; ++i) {
    const auto o = JointDensity4::outcome(i);
    CHECK(JointDensity4::index(o[0], o[1], o[2], o[3]) == i);
  }
}

TEST_CASE("free-parameter interval fixtures") {
  using bvc::RationalInterval;
  CHECK(bvc::feasible_t_interval({Rational(0), Rational(0), Rational(0)}) ==
        RationalInterval{Rational(-1), Rational(1)});
  CHECK(bvc::feasible_t_interval({Rational(1), Rational(1), Rational(1)}) ==
        RationalInterval{Rational(0), Rational(0)});
  CHECK(bvc::feasible_t_interval({q(1, 2), q(1, 2), q(1, 2)}) ==
        RationalInterval{q(-1, 2), q(1, 2)});
  CHECK_FALSE(
      bvc::feasible_t_interval({q(1, 2), q(1, 2), q(-1, 2)}).has_value());
}

TEST_CASE("three-variable witness at a symmetric point") {
  const CovarianceTriple s{q(1, 2), q(1, 2), q(1, 2)};
  const auto out = bvc::reconstruct_joint(s, Rational(0));
  REQUIRE(std::holds_alternative<JointDensity3>(out));
  const auto& j = std::get<JointDensity3>(out);
  CHECK(j.at(1, 1, 1) == q(5, 16));
  CHECK(j.at(-1, -1, -1) == q(5, 16));
  CHECK(j.at(1, 1, -1) == q(1, 16));
  CHECK(j.at(1, -1, 1) == q(1, 16));
  CHECK(j.at(-1, 1, 1) == q(1, 16));
  CHECK(j.at(1, -1, -1) == q(1, 16));

  const auto ab = bvc::joint_pair_marginal(j, bvc::VariablePair::AB);
  CHECK(ab == bvc::density_from_covariance(q(1, 2)));
  CHECK(bvc::joint_pair_marginal(j, bvc::VariablePair::AC) == ab);
  CHECK(bvc::joint_pair_marginal(j, bvc::VariablePair::BC) == ab);
}

TEST_CASE("pair marginals are invariant along the free direction") {
  const CovarianceTriple s{q(1, 2), q(1, 2), q(1, 2)};
  const auto interval = bvc::feasible_t_interval(s);
  REQUIRE(interval.has_value());
  for (const Rational& t : {interval->lo, Rational(0), interval->hi}) {
    const auto out = bvc::reconstruct_joint(s, t);
    REQUIRE(std::holds_alternative<JointDensity3>(out));
    const auto& j = std::get<JointDensity3>(out);
    CHECK(bvc::joint_pair_marginal(j, bvc::VariablePair::AB) ==
          bvc::density_from_covariance(s.ab));
    CHECK(bvc::joint_pair_marginal(j, bvc::VariablePair::AC) ==
          bvc::density_from_covariance(s.ac));
    CHECK(bvc::joint_pair_marginal(j, bvc::VariablePair::BC) ==
          bvc::density_from_covariance(s.bc));
  }
}

TEST_CASE("out-of-interval parameter throws, infeasible triple reports facets") {
  CHECK_THROWS_AS(
      bvc::reconstruct_joint({q(1, 2), q(1, 2), q(1, 2)}, q(3, 4)),
      bvc::ParameterOutOfRange);

  const auto out = bvc::reconstruct_joint({q(1, 2), q(1, 2), q(-1, 2)}, Rational(0));
  REQUIRE(std::holds_alternative<bvc::Infeasible3>(out));
  const auto v = std::get<bvc::Infeasible3>(out).tetrahedron.violations();
  REQUIRE(v.size() == 1);
  CHECK(v[0].id == "T4");
  CHECK(v[0].slack == q(-1, 2));
}

namespace {

std::size_t exact_rank(bvc::LinearSystem sys) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < sys.cols && rank < sys.rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < sys.rows && sys.at(pivot, col) == 0) ++pivot;
    if (pivot == sys.rows) continue;
    for (std::size_t c = 0; c < sys.cols; ++c)
      std::swap(sys.at(rank, c), sys.at(pivot, c));
    const Rational inv = sys.at(rank, col);
    for (std::size_t r = 0; r < sys.rows; ++r) {
      if (r == rank || sys.at(r, col) == 0) continue;
      const Rational f = Rational(sys.at(r, col) / inv);
      for (std::size_t c = col; c < sys.cols; ++c)
        sys.at(r, c) -= Rational(f * sys.at(rank, c));
    }
    ++rank;
  }
  return rank;
}

bvc::MarginalComplex triple_complex(const CovarianceTriple& s) {
  bvc::MarginalComplex c;
  c.variables = {{"A", {1, -1}}, {"B", {1, -1}}, {"C", {1, -1}}};
  const auto add = [&c](const char* v1, const char* v2, const Rational& sigma) {
    const auto d = bvc::density_from_covariance(sigma);
    bvc::MarginalConstraint mc;
    mc.over = {v1, v2};
    mc.table[{1, 1}] = d.pp;
    mc.table[{1, -1}] = d.pm;
    mc.table[{-1, 1}] = d.mp;
    mc.table[{-1, -1}] = d.mm;
    c.constraints.push_back(mc);
  };
  add("A", "B", s.ab);
  add("A", "C", s.ac);
  add("B", "C", s.bc);
  return c;
}

}  // namespace

TEST_CASE("the three-pair system has a one-dimensional kernel") {
  // Twelve cell equations plus total mass over eight atoms: rank 7, so the
  // solution set of any feasible instance is a line. The direction is the
  // parity vector v[x,y,z] = xyz, which the closed form exposes as its free
  // parameter.
  const auto built =
      bvc::build_complex_system(triple_complex({q(1, 2), q(1, 2), q(1, 2)}));
  REQUIRE(built.system.rows == 13);
  REQUIRE(built.system.cols == 8);
  CHECK(exact_rank(built.system) == 7);

  for (std::size_t r = 0; r < built.system.rows; ++r) {
    Rational acc(0);
    for (std::size_t c = 0; c < built.system.cols; ++c) {
      const auto o = JointDensity3::outcome(c);
      acc += built.system.at(r, c) * (o[0] * o[1] * o[2]);
    }
    CHECK(acc == 0);
  }

  // The rank is the same wherever the right-hand side sits in the cube.
  const auto other =
      bvc::build_complex_system(triple_complex({q(1, 4), q(-3, 4), Rational(0)}));
  CHECK(exact_rank(other.system) == 7);
}

TEST_CASE("four-variable system shape") {
  const auto built = bvc::build_chsh_system(
      {Rational(0), Rational(0), Rational(0), Rational(0)});
  REQUIRE(built.row_ids.size() == 9);
  CHECK(built.row_ids[0] == "mass");
  CHECK(built.row_ids[1] == "mean:A1");
  CHECK(built.row_ids[4] == "mean:B2");
  CHECK(built.row_ids[5] == "cov:A1B1");
  CHECK(built.row_ids[8] == "cov:A2B2");
  CHECK(built.system.rows == 9);
  CHECK(built.system.cols == 16);
}

TEST_CASE("four-variable witnesses reproduce their prescriptions") {
  std::uint64_t state = 321;
  int feasible_seen = 0;
  for (int trial = 0; trial < 120; ++trial) {
    CovarianceQuad s;
    for (Rational* f : {&s.a1b1, &s.a1b2, &s.a2b1, &s.a2b2}) {
      state = mix(state);
      *f = q(static_cast<long>(state % 17) - 8, 8);
    }
    const auto out = bvc::chsh_reconstruct(s);
    const bool feasible = std::holds_alternative<JointDensity4>(out);
    CHECK(feasible == bvc::chsh_check(s).satisfied);
    if (!feasible) continue;
    ++feasible_seen;
    const auto& j = std::get<JointDensity4>(out);
    Rational total(0);
    for (const auto& mass : j.p) {
      CHECK(mass >= 0);
      total += mass;
    }
    CHECK(total == 1);
    for (int v = 0; v < 4; ++v) CHECK(quad_mean(j, v) == 0);
    CHECK(quad_cov(j, 0, 2) == s.a1b1);
    CHECK(quad_cov(j, 0, 3) == s.a1b2);
    CHECK(quad_cov(j, 1, 2) == s.a2b1);
    CHECK(quad_cov(j, 1, 3) == s.a2b2);
  }
  CHECK(feasible_seen > 20);
}

TEST_CASE("four-variable certificates align with the labeled rows") {
  const CovarianceQuad s{Rational(1), Rational(1), Rational(1), Rational(-1)};
  const auto out = bvc::chsh_reconstruct(s);
  REQUIRE(std::holds_alternative<bvc::InfeasibleChsh>(out));
  const auto& cert = std::get<bvc::InfeasibleChsh>(out).certificate;
  const auto built = bvc::build_chsh_system(s);
  REQUIRE(cert.size() == built.row_ids.size());
  CHECK(bvc::check_farkas_certificate(built.system, cert));

  const auto boundary =
      bvc::chsh_reconstruct({q(1, 2), q(1, 2), q(1, 2), q(-1, 2)});
  CHECK(std::holds_alternative<JointDensity4>(boundary));
}
