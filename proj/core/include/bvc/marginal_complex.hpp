#pragma once

#include "bvc/rational.hpp"
#include "bvc/simplex.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bvc {

using Outcome = std::int64_t;

struct Variable {
  std::string name;
  std::vector<Outcome> alphabet;  // declared order fixes atom enumeration
};

// One prescribed marginal: a probability table over the product alphabet of
// `over`. Cells absent from `table` are zero.
struct MarginalConstraint {
  std::vector<std::string> over;
  std::map<std::vector<Outcome>, Rational> table;
};

// A finite family of prescribed marginals over named finite-alphabet
// variables. Whether the family arises from one joint distribution is
// exactly what solve_complex decides.
struct MarginalComplex {
  std::vector<Variable> variables;
  std::vector<MarginalConstraint> constraints;
};

inline constexpr std::size_t kDefaultAtomCap = 1'000'000;

// Structural validation: nonempty distinct alphabets, unique variable
// names, constraints over declared variables without repetition, no two
// constraints over the same variable set, tables nonnegative with cells in
// the subset's alphabet and summing to exactly 1. Throws InvalidComplex,
// NegativeMass or MassSumNotOne.
void validate_complex(const MarginalComplex& c);

// Pairwise agreement of overlapping constraints on the shared sub-marginal;
// disagreement means malformed input, not genuine infeasibility, and is
// reported (InconsistentOverlap, naming the conflicting cell) before any LP
// runs.
void check_overlap_consistency(const MarginalComplex& c);

// The assembled LP: one column per atom of the product alphabet (atoms in
// lexicographic order of the declared alphabets), one row per table cell of
// each constraint in declaration order, plus a final total-mass row.
struct ComplexSystem {
  LinearSystem system;
  std::vector<std::string> row_ids;              // "A,B:1,-1", ..., "mass"
  std::vector<std::vector<Outcome>> atoms;       // column order
  std::vector<std::string> atom_ids;             // "1,-1,..." per column
};

// Throws ProductSpaceTooLarge when the product alphabet exceeds atom_cap.
ComplexSystem build_complex_system(const MarginalComplex& c,
                                   std::size_t atom_cap = kDefaultAtomCap);

// Either an explicit joint density (per atom, reproducing every prescribed
// marginal exactly) or a Farkas certificate (per scalar constraint row).
struct ComplexSolution {
  std::vector<std::string> row_ids;
  std::vector<std::string> atom_ids;
  std::optional<std::vector<Rational>> witness;
  std::optional<std::vector<Rational>> certificate;

  bool feasible() const { return witness.has_value(); }
};

// Validates, checks overlaps, assembles and solves. Deterministic: the
// same complex always yields the identical witness or certificate.
ComplexSolution solve_complex(const MarginalComplex& c,
                              std::size_t atom_cap = kDefaultAtomCap);

// Independent soundness check of an infeasibility certificate: the
// combination y must have nonnegative coefficient on every atom and
// strictly negative combined right-hand side. Throws DimensionMismatch if
// y's length is not the scalar constraint count of c.
bool verify_certificate(const MarginalComplex& c,
                        const std::vector<Rational>& y,
                        std::size_t atom_cap = kDefaultAtomCap);

}  // namespace bvc
