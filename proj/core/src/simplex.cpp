#include "bvc/simplex.hpp"

#include "bvc/errors.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace bvc {

LinearSystem::LinearSystem(std::size_t rows_, std::size_t cols_)
    : rows(rows_), cols(cols_), coeffs(rows_ * cols_), rhs(rows_) {}

Rational& LinearSystem::at(std::size_t r, std::size_t c) {
  return coeffs[r * cols + c];
}

const Rational& LinearSystem::at(std::size_t r, std::size_t c) const {
  return coeffs[r * cols + c];
}

namespace {

// Phase-1 tableau over the sign-flipped system A'x = b', b' >= 0, with one
// artificial column per row. Columns 0..n-1 are structural, n..n+m-1
// artificial; the artificial block starts as the identity, so at any basis
// it holds B^{-1} and the dual vector can be read off it.
struct Tableau {
  std::size_t m = 0, n = 0;
  std::vector<std::vector<Rational>> row;  // m x (n + m)
  std::vector<Rational> rhs;               // invariant: >= 0
  std::vector<std::size_t> basis;          // basic column per row
  std::vector<int> flip;                   // +1 / -1 per original row

  explicit Tableau(const LinearSystem& sys)
      : m(sys.rows),
        n(sys.cols),
        row(sys.rows),
        rhs(sys.rows),
        basis(sys.rows),
        flip(sys.rows, 1) {
    for (std::size_t i = 0; i < m; ++i) {
      if (sys.rhs[i] < 0) flip[i] = -1;
      row[i].resize(n + m);
      for (std::size_t j = 0; j < n; ++j) {
        row[i][j] = flip[i] > 0 ? sys.at(i, j) : Rational(-sys.at(i, j));
      }
      row[i][n + i] = 1;
      rhs[i] = flip[i] > 0 ? sys.rhs[i] : Rational(-sys.rhs[i]);
      basis[i] = n + i;
    }
  }

  bool basic_is_artificial(std::size_t i) const { return basis[i] >= n; }

  // Reduced cost of column j under the phase-1 objective (artificials cost
  // 1, structural columns 0): c_j - sum over artificial-basic rows of the
  // tableau entry.
  Rational reduced_cost(std::size_t j) const {
    Rational r = j >= n ? 1 : 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (basic_is_artificial(i)) r -= row[i][j];
    }
    return r;
  }

  // Bland: smallest column index with negative reduced cost.
  std::optional<std::size_t> entering() const {
    for (std::size_t j = 0; j < n + m; ++j) {
      if (basis_contains(j)) continue;
      if (reduced_cost(j) < 0) return j;
    }
    return std::nullopt;
  }

  bool basis_contains(std::size_t j) const {
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] == j) return true;
    }
    return false;
  }

  // Minimum-ratio row for the entering column; ties break toward the
  // smallest basic column index (the other half of Bland's rule).
  std::optional<std::size_t> leaving(std::size_t e) const {
    std::optional<std::size_t> best;
    Rational best_ratio;
    for (std::size_t i = 0; i < m; ++i) {
      if (row[i][e] <= 0) continue;
      Rational ratio(rhs[i] / row[i][e]);
      if (!best || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[*best])) {
        best = i;
        best_ratio = ratio;
      }
    }
    return best;
  }

  void pivot(std::size_t r, std::size_t e) {
    Rational inv(1 / row[r][e]);
    for (auto& v : row[r]) v *= inv;
    rhs[r] *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || row[i][e] == 0) continue;
      Rational factor = row[i][e];
      for (std::size_t j = 0; j < n + m; ++j) {
        row[i][j] -= factor * row[r][j];
      }
      rhs[i] -= factor * rhs[r];
    }
    basis[r] = e;
  }

  // Phase-1 objective value: total artificial mass still in the basis.
  Rational objective() const {
    Rational z = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (basic_is_artificial(i)) z += rhs[i];
    }
    return z;
  }
};

}  // namespace

bool check_farkas_certificate(const LinearSystem& sys,
                              const std::vector<Rational>& y) {
  if (y.size() != sys.rows) {
    throw DimensionMismatch("certificate length does not match row count");
  }
  for (std::size_t j = 0; j < sys.cols; ++j) {
    Rational combo = 0;
    for (std::size_t i = 0; i < sys.rows; ++i) {
      combo += y[i] * sys.at(i, j);
    }
    if (combo < 0) return false;
  }
  Rational value = 0;
  for (std::size_t i = 0; i < sys.rows; ++i) {
    value += y[i] * sys.rhs[i];
  }
  return value < 0;
}

FeasibilityOutcome solve_nonnegative(const LinearSystem& sys) {
  Tableau t(sys);
  while (auto e = t.entering()) {
    auto r = t.leaving(*e);
    if (!r) {
      // The phase-1 objective is bounded below by 0, so an unbounded ray
      // cannot exist.
      throw Error("phase-1 simplex reported an unbounded direction");
    }
    t.pivot(*r, *e);
  }

  FeasibilityOutcome out;
  if (t.objective() == 0) {
    std::vector<Rational> x(sys.cols, Rational(0));
    for (std::size_t i = 0; i < t.m; ++i) {
      if (t.basis[i] < t.n) x[t.basis[i]] = t.rhs[i];
    }
    for (const auto& v : x) {
      if (v < 0) throw Error("simplex witness has a negative entry");
    }
    for (std::size_t i = 0; i < sys.rows; ++i) {
      Rational lhs = 0;
      for (std::size_t j = 0; j < sys.cols; ++j) {
        lhs += sys.at(i, j) * x[j];
      }
      if (lhs != sys.rhs[i]) {
        throw Error("simplex witness fails the input equations");
      }
    }
    out.solution = std::move(x);
  } else {
    // Dual prices off the artificial block: y_i = e_i^T B^{-T} c_B. With
    // optimum > 0 they satisfy y^T A' <= 0, y^T b' > 0; mapping back
    // through the row flips and negating yields the advertised direction
    // (nonnegative on every column, negative against the right-hand side).
    std::vector<Rational> cert(sys.rows);
    for (std::size_t i = 0; i < t.m; ++i) {
      Rational y = 0;
      for (std::size_t k = 0; k < t.m; ++k) {
        if (t.basic_is_artificial(k)) y += t.row[k][t.n + i];
      }
      cert[i] = Rational(-t.flip[i] * y);
    }
    if (!check_farkas_certificate(sys, cert)) {
      throw Error("simplex certificate fails the Farkas conditions");
    }
    out.certificate = std::move(cert);
  }
  return out;
}

}  // namespace bvc
