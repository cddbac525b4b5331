#include "bvc/marginal_complex.hpp"

#include "bvc/densities.hpp"
#include "bvc/errors.hpp"

#include <algorithm>
#include <cstddef>
#include <set>
#include <sstream>
#include <utility>

namespace bvc {

namespace {

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ',';
    out += names[i];
  }
  return out;
}

std::string join_outcomes(const std::vector<Outcome>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::size_t variable_position(const MarginalComplex& c,
                              const std::string& name) {
  for (std::size_t i = 0; i < c.variables.size(); ++i) {
    if (c.variables[i].name == name) return i;
  }
  throw InvalidComplex("constraint over undeclared variable \"" + name + "\"");
}

// All outcome tuples over the given alphabets, first coordinate slowest.
// visit() returning false aborts the walk.
template <typename Visit>
void for_each_tuple(const std::vector<const std::vector<Outcome>*>& alphabets,
                    Visit visit) {
  std::vector<Outcome> tuple(alphabets.size());
  std::vector<std::size_t> pos(alphabets.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < alphabets.size(); ++i) {
      tuple[i] = (*alphabets[i])[pos[i]];
    }
    if (!visit(tuple)) return;
    std::size_t i = alphabets.size();
    while (i > 0) {
      --i;
      if (++pos[i] < alphabets[i]->size()) break;
      pos[i] = 0;
      if (i == 0) return;
    }
    if (alphabets.empty()) return;
  }
}

// The marginal of a constraint's table on a sub-list of its variables,
// keyed by the sub-tuple in the order `positions` lists them.
std::map<std::vector<Outcome>, Rational> project_table(
    const MarginalConstraint& constraint,
    const std::vector<std::size_t>& positions) {
  std::map<std::vector<Outcome>, Rational> out;
  for (const auto& [cell, mass] : constraint.table) {
    std::vector<Outcome> key(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
      key[i] = cell[positions[i]];
    }
    out[key] += mass;
  }
  return out;
}

}  // namespace

void validate_complex(const MarginalComplex& c) {
  std::set<std::string> names;
  for (const auto& v : c.variables) {
    if (v.name.empty()) throw InvalidComplex("variable with empty name");
    if (!names.insert(v.name).second) {
      throw InvalidComplex("duplicate variable \"" + v.name + "\"");
    }
    if (v.alphabet.empty()) {
      throw InvalidComplex("variable \"" + v.name + "\" has an empty alphabet");
    }
    std::set<Outcome> seen(v.alphabet.begin(), v.alphabet.end());
    if (seen.size() != v.alphabet.size()) {
      throw InvalidComplex("variable \"" + v.name +
                           "\" repeats an alphabet entry");
    }
  }

  std::set<std::set<std::string>> subsets;
  for (const auto& constraint : c.constraints) {
    if (constraint.over.empty()) {
      throw InvalidComplex("constraint over no variables");
    }
    std::set<std::string> over_set;
    for (const auto& name : constraint.over) {
      variable_position(c, name);
      if (!over_set.insert(name).second) {
        throw InvalidComplex("constraint repeats variable \"" + name + "\"");
      }
    }
    if (!subsets.insert(over_set).second) {
      throw InvalidComplex("two constraints over the variables " +
                           join_names(constraint.over));
    }

    Rational total = 0;
    for (const auto& [cell, mass] : constraint.table) {
      if (cell.size() != constraint.over.size()) {
        throw InvalidComplex("table cell " + join_outcomes(cell) +
                             " has the wrong arity for " +
                             join_names(constraint.over));
      }
      for (std::size_t i = 0; i < cell.size(); ++i) {
        const Variable& var = c.variables[variable_position(c, constraint.over[i])];
        if (std::find(var.alphabet.begin(), var.alphabet.end(), cell[i]) ==
            var.alphabet.end()) {
          throw InvalidComplex("outcome " + std::to_string(cell[i]) +
                               " not in the alphabet of \"" + var.name + "\"");
        }
      }
      if (mass < 0) {
        throw NegativeMass("negative mass " + mass.str() + " in table for " +
                           join_names(constraint.over));
      }
      total += mass;
    }
    if (total != 1) {
      throw MassSumNotOne(Rational(1 - total));
    }
  }
}

void check_overlap_consistency(const MarginalComplex& c) {
  for (std::size_t a = 0; a < c.constraints.size(); ++a) {
    for (std::size_t b = a + 1; b < c.constraints.size(); ++b) {
      const auto& ca = c.constraints[a];
      const auto& cb = c.constraints[b];
      // Shared variables, in complex declaration order so both projections
      // key their sub-tuples identically.
      std::vector<std::string> shared;
      for (const auto& v : c.variables) {
        bool in_a = std::find(ca.over.begin(), ca.over.end(), v.name) !=
                    ca.over.end();
        bool in_b = std::find(cb.over.begin(), cb.over.end(), v.name) !=
                    cb.over.end();
        if (in_a && in_b) shared.push_back(v.name);
      }
      if (shared.empty()) continue;

      auto positions_in = [&](const MarginalConstraint& constraint) {
        std::vector<std::size_t> pos;
        for (const auto& name : shared) {
          pos.push_back(static_cast<std::size_t>(
              std::find(constraint.over.begin(), constraint.over.end(), name) -
              constraint.over.begin()));
        }
        return pos;
      };
      auto ma = project_table(ca, positions_in(ca));
      auto mb = project_table(cb, positions_in(cb));

      std::set<std::vector<Outcome>> keys;
      for (const auto& [k, v] : ma) keys.insert(k);
      for (const auto& [k, v] : mb) keys.insert(k);
      for (const auto& k : keys) {
        Rational va = ma.count(k) ? ma.at(k) : Rational(0);
        Rational vb = mb.count(k) ? mb.at(k) : Rational(0);
        if (va != vb) {
          std::ostringstream msg;
          msg << "constraints over " << join_names(ca.over) << " and "
              << join_names(cb.over) << " disagree on " << join_names(shared)
              << " = " << join_outcomes(k) << ": " << va.str() << " vs "
              << vb.str();
          throw InconsistentOverlap(msg.str());
        }
      }
    }
  }
}

ComplexSystem build_complex_system(const MarginalComplex& c,
                                   std::size_t atom_cap) {
  validate_complex(c);  // row alignment below relies on well-formed tables
  std::size_t atom_count = 1;
  for (const auto& v : c.variables) {
    if (atom_count > atom_cap / v.alphabet.size()) {
      throw ProductSpaceTooLarge("product space exceeds the atom cap of " +
                                 std::to_string(atom_cap));
    }
    atom_count *= v.alphabet.size();
  }

  ComplexSystem built;
  std::vector<const std::vector<Outcome>*> alphabets;
  for (const auto& v : c.variables) alphabets.push_back(&v.alphabet);
  for_each_tuple(alphabets, [&](const std::vector<Outcome>& atom) {
    built.atoms.push_back(atom);
    built.atom_ids.push_back(join_outcomes(atom));
    return true;
  });

  // One row per explicitly given table cell, in the order the product
  // alphabet of the constraint enumerates cells; the total-mass row comes
  // last. Cells missing from a table need no row: the present cells sum to
  // 1, so the mass row already forces zero mass onto the missing ones.
  struct Row {
    std::vector<std::size_t> positions;
    std::vector<Outcome> cell;
    Rational mass;
  };
  std::vector<Row> rows;
  for (const auto& constraint : c.constraints) {
    std::vector<std::size_t> positions;
    std::vector<const std::vector<Outcome>*> sub;
    for (const auto& name : constraint.over) {
      positions.push_back(variable_position(c, name));
      sub.push_back(&c.variables[positions.back()].alphabet);
    }
    for_each_tuple(sub, [&](const std::vector<Outcome>& cell) {
      auto it = constraint.table.find(cell);
      if (it != constraint.table.end()) {
        rows.push_back(Row{positions, cell, it->second});
        built.row_ids.push_back(join_names(constraint.over) + ":" +
                                join_outcomes(cell));
      }
      return true;
    });
  }
  built.row_ids.push_back("mass");

  built.system = LinearSystem(rows.size() + 1, atom_count);
  for (std::size_t col = 0; col < atom_count; ++col) {
    const auto& atom = built.atoms[col];
    for (std::size_t r = 0; r < rows.size(); ++r) {
      bool match = true;
      for (std::size_t i = 0; i < rows[r].positions.size(); ++i) {
        if (atom[rows[r].positions[i]] != rows[r].cell[i]) {
          match = false;
          break;
        }
      }
      if (match) built.system.at(r, col) = 1;
    }
    built.system.at(rows.size(), col) = 1;
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    built.system.rhs[r] = rows[r].mass;
  }
  built.system.rhs[rows.size()] = 1;
  return built;
}

ComplexSolution solve_complex(const MarginalComplex& c, std::size_t atom_cap) {
  validate_complex(c);
  check_overlap_consistency(c);
  ComplexSystem built = build_complex_system(c, atom_cap);
  FeasibilityOutcome outcome = solve_nonnegative(built.system);
  ComplexSolution solution;
  solution.row_ids = std::move(built.row_ids);
  solution.atom_ids = std::move(built.atom_ids);
  solution.witness = std::move(outcome.solution);
  solution.certificate = std::move(outcome.certificate);
  return solution;
}

bool verify_certificate(const MarginalComplex& c,
                        const std::vector<Rational>& y, std::size_t atom_cap) {
  ComplexSystem built = build_complex_system(c, atom_cap);
  return check_farkas_certificate(built.system, y);
}

}  // namespace bvc
