#include "bvc/reconstruct.hpp"

#include "bvc/errors.hpp"

#include <algorithm>
#include <utility>

namespace bvc {

namespace {

constexpr std::array<int, 2> kSigns = {1, -1};

std::size_t bit(int v) { return v == 1 ? 0 : 1; }

}  // namespace

std::size_t JointDensity3::index(int x, int y, int z) {
  return bit(x) * 4 + bit(y) * 2 + bit(z);
}

std::array<int, 3> JointDensity3::outcome(std::size_t index) {
  return {kSigns[(index >> 2) & 1], kSigns[(index >> 1) & 1],
          kSigns[index & 1]};
}

const Rational& JointDensity3::at(int x, int y, int z) const {
  return p[index(x, y, z)];
}

std::size_t JointDensity4::index(int a1, int a2, int b1, int b2) {
  return bit(a1) * 8 + bit(a2) * 4 + bit(b1) * 2 + bit(b2);
}

std::array<int, 4> JointDensity4::outcome(std::size_t index) {
  return {kSigns[(index >> 3) & 1], kSigns[(index >> 2) & 1],
          kSigns[(index >> 1) & 1], kSigns[index & 1]};
}

std::optional<RationalInterval> feasible_t_interval(const CovarianceTriple& s) {
  // Each atom mass of the closed form is (T_i +- t) / 8 for one of the four
  // facet values T_i, so nonnegativity of all eight atoms is exactly
  // |t| <= min_i T_i.
  Rational m = std::min(
      {Rational(1 + s.ab + s.ac + s.bc), Rational(1 + s.ab - s.ac - s.bc),
       Rational(1 - s.ab + s.ac - s.bc), Rational(1 - s.ab - s.ac + s.bc)});
  if (m < 0) return std::nullopt;
  return RationalInterval{Rational(-m), m};
}

std::variant<JointDensity3, Infeasible3> reconstruct_joint(
    const CovarianceTriple& s, const Rational& t) {
  InequalityReport tetra = tetrahedron_check(s);
  if (!tetra.satisfied) {
    return Infeasible3{std::move(tetra)};
  }
  auto interval = feasible_t_interval(s);
  if (!interval->contains(t)) {
    throw ParameterOutOfRange("t = " + t.str() + " outside [" +
                              interval->lo.str() + ", " + interval->hi.str() +
                              "]");
  }
  JointDensity3 joint;
  for (std::size_t i = 0; i < joint.p.size(); ++i) {
    auto [x, y, z] = JointDensity3::outcome(i);
    joint.p[i] = Rational(
        (1 + s.ab * (x * y) + s.ac * (x * z) + s.bc * (y * z) + t * (x * y * z)) /
        8);
  }
  return joint;
}

PairDensity joint_pair_marginal(const JointDensity3& j, VariablePair pair) {
  PairDensity d{0, 0, 0, 0};
  for (std::size_t i = 0; i < j.p.size(); ++i) {
    auto [x, y, z] = JointDensity3::outcome(i);
    int u = 0, v = 0;
    switch (pair) {
      case VariablePair::AB: u = x, v = y; break;
      case VariablePair::AC: u = x, v = z; break;
      case VariablePair::BC: u = y, v = z; break;
    }
    Rational& cell = u == 1 ? (v == 1 ? d.pp : d.pm) : (v == 1 ? d.mp : d.mm);
    cell += j.p[i];
  }
  return d;
}

ChshSystem build_chsh_system(const CovarianceQuad& s) {
  ChshSystem built;
  built.row_ids = {"mass",     "mean:A1",   "mean:A2",   "mean:B1",
                   "mean:B2",  "cov:A1B1",  "cov:A1B2",  "cov:A2B1",
                   "cov:A2B2"};
  built.system = LinearSystem(built.row_ids.size(), 16);
  LinearSystem& sys = built.system;
  for (std::size_t col = 0; col < 16; ++col) {
    auto [a1, a2, b1, b2] = JointDensity4::outcome(col);
    sys.at(0, col) = 1;
    sys.at(1, col) = a1;
    sys.at(2, col) = a2;
    sys.at(3, col) = b1;
    sys.at(4, col) = b2;
    sys.at(5, col) = a1 * b1;
    sys.at(6, col) = a1 * b2;
    sys.at(7, col) = a2 * b1;
    sys.at(8, col) = a2 * b2;
  }
  sys.rhs = {Rational(1), Rational(0), Rational(0), Rational(0), Rational(0),
             s.a1b1,      s.a1b2,      s.a2b1,      s.a2b2};
  return built;
}

std::variant<JointDensity4, InfeasibleChsh> chsh_reconstruct(
    const CovarianceQuad& s) {
  // Zero single-variable means are imposed on top of the four covariance
  // rows. This never changes feasibility: averaging any solution with its
  // global sign flip preserves every pair covariance and kills the means.
  ChshSystem built = build_chsh_system(s);
  FeasibilityOutcome outcome = solve_nonnegative(built.system);
  if (outcome.feasible()) {
    JointDensity4 joint;
    for (std::size_t i = 0; i < 16; ++i) joint.p[i] = (*outcome.solution)[i];
    return joint;
  }
  return InfeasibleChsh{std::move(*outcome.certificate)};
}

}  // namespace bvc
