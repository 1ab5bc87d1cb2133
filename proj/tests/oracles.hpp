#pragma once

// Reference computations for the tests. Nothing here calls into the library
// beyond reading matrix entries and basis names, so agreement is a real check.

#include "strata/integer_linalg.hpp"

#include <gmpxx.h>

#include <cctype>
#include <iterator>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

using strata::Integer;
using strata::IntMatrix;

inline std::vector<std::vector<mpq_class>> to_rational(const IntMatrix& m) {
  std::vector<std::vector<mpq_class>> out(m.rows(), std::vector<mpq_class>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = mpq_class(m(r, c));
  return out;
}

/// Reduced row echelon form over Q, in place. Returns the pivot columns.
inline std::vector<std::size_t> rref(std::vector<std::vector<mpq_class>>& a, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < ncols && row < a.size(); ++c) {
    std::size_t p = row;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[row]);
    const mpq_class lead = a[row][c];
    for (auto& v : a[row]) v /= lead;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][c] == 0) continue;
      const mpq_class f = a[r][c];
      for (std::size_t k = 0; k < a[r].size(); ++k) a[r][k] -= f * a[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

inline std::size_t rank_q(const IntMatrix& m) {
  auto a = to_rational(m);
  return rref(a, m.cols()).size();
}

/// Fraction-free (Bareiss) determinant of a square matrix.
inline Integer det(const IntMatrix& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("det of a non-square matrix");
  if (n == 0) return 1;
  std::vector<std::vector<Integer>> a(n, std::vector<Integer>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a[r][c] = m(r, c);
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[i][j] = v;
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

enum class Outcome { unique, none, many };

struct Classified {
  Outcome outcome;
  std::vector<Integer> x;  // set for unique
};

/// Integer solutions of a x = b, found without Hermite forms. The rational
/// solution set is x_pivot = c - R x_free. An integer solution exists iff
/// some x_free in the box [0, D)^free makes every pivot coordinate integral,
/// D being the lcm of the denominators in the reduced rows (shifting x_free
/// by D keeps integrality, so when one exists there are infinitely many).
inline Classified classify(const IntMatrix& a, const std::vector<Integer>& b) {
  const std::size_t n = a.cols();
  auto aug = to_rational(a);
  for (std::size_t r = 0; r < aug.size(); ++r) aug[r].push_back(mpq_class(b[r]));
  const auto pivots = rref(aug, n);
  for (std::size_t r = pivots.size(); r < aug.size(); ++r)
    if (aug[r][n] != 0) return {Outcome::none, {}};

  std::vector<std::size_t> free;
  for (std::size_t c = 0, p = 0; c < n; ++c) {
    if (p < pivots.size() && pivots[p] == c) {
      ++p;
      continue;
    }
    free.push_back(c);
  }

  if (free.empty()) {
    std::vector<Integer> x(n);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      if (aug[r][n].get_den() != 1) return {Outcome::none, {}};
      x[pivots[r]] = aug[r][n].get_num();
    }
    return {Outcome::unique, x};
  }

  Integer d = 1;
  for (std::size_t r = 0; r < pivots.size(); ++r)
    for (const auto& v : aug[r]) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), v.get_den_mpz_t());
  Integer boxes = 1;
  for (std::size_t k = 0; k < free.size(); ++k) boxes *= d;
  if (boxes > 2000000) throw std::runtime_error("oracle box too large");

  std::vector<long> f(free.size(), 0);
  const long dl = d.get_si();
  while (true) {
    bool integral = true;
    for (std::size_t r = 0; r < pivots.size() && integral; ++r) {
      mpq_class v = aug[r][n];
      for (std::size_t k = 0; k < free.size(); ++k) v -= aug[r][free[k]] * f[k];
      integral = v.get_den() == 1;
    }
    if (integral) return {Outcome::many, {}};
    std::size_t k = 0;
    while (k < f.size() && ++f[k] == dl) f[k++] = 0;
    if (k == f.size()) break;
  }
  return {Outcome::none, {}};
}

/// Number of integer x in [-bound, bound]^cols with a x = b, stopping at `cap`.
inline std::size_t count_in_box(const IntMatrix& a, const std::vector<Integer>& b, long bound,
                                std::size_t cap = 2) {
  const std::size_t n = a.cols();
  std::vector<long> x(n, -bound);
  std::size_t found = 0;
  while (true) {
    bool ok = true;
    for (std::size_t r = 0; r < a.rows() && ok; ++r) {
      Integer s = 0;
      for (std::size_t c = 0; c < n; ++c) s += a(r, c) * x[c];
      ok = s == b[r];
    }
    if (ok && ++found >= cap) return found;
    std::size_t k = 0;
    while (k < n && ++x[k] > bound) x[k++] = -bound;
    if (k == n) break;
  }
  return found;
}

/// Polynomials in h_1..h_r truncated at h_i^{d_i+1}: the ring a
/// projective_product presentation is supposed to model.
using Monomial = std::vector<int>;
using Poly = std::map<Monomial, Integer>;

/// Parses a basis name like "1", "h", "h^2", "h1*h2^3" into exponents.
inline Monomial parse_monomial(const std::string& name, std::size_t vars) {
  Monomial e(vars, 0);
  if (name == "1") return e;
  std::size_t pos = 0;
  while (pos < name.size()) {
    if (name[pos] != 'h') throw std::invalid_argument("bad monomial " + name);
    ++pos;
    std::size_t var = 0;
    std::size_t digits = pos;
    while (digits < name.size() && std::isdigit(static_cast<unsigned char>(name[digits]))) ++digits;
    if (digits > pos) var = std::stoul(name.substr(pos, digits - pos)) - 1;
    pos = digits;
    int power = 1;
    if (pos < name.size() && name[pos] == '^') {
      std::size_t end = pos + 1;
      while (end < name.size() && std::isdigit(static_cast<unsigned char>(name[end]))) ++end;
      power = std::stoi(name.substr(pos + 1, end - pos - 1));
      pos = end;
    }
    e.at(var) += power;
    if (pos < name.size() && name[pos] == '*') ++pos;
  }
  return e;
}

inline Poly multiply(const Poly& x, const Poly& y, const std::vector<int>& dims) {
  Poly out;
  for (const auto& [ma, ca] : x)
    for (const auto& [mb, cb] : y) {
      Monomial m(dims.size());
      bool alive = true;
      for (std::size_t i = 0; i < dims.size(); ++i) {
        m[i] = ma[i] + mb[i];
        alive = alive && m[i] <= dims[i];
      }
      if (alive) out[m] += ca * cb;
    }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

}  // namespace oracle
