#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace strata {

using Integer = mpz_class;

/// Dense row-major matrix over the integers. All arithmetic is exact.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  std::span<const Integer> row(std::size_t r) const {
    return {entries_.data() + r * cols_, cols_};
  }

  IntMatrix transpose() const;
  bool is_zero() const;

  /// Copies `block` into this matrix with its top-left corner at (r0, c0).
  void set_block(std::size_t r0, std::size_t c0, const IntMatrix& block);

  friend bool operator==(const IntMatrix& a, const IntMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> entries_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
std::vector<Integer> operator*(const IntMatrix& a, std::span<const Integer> x);

std::string to_string(const IntMatrix& m);

/// Row Hermite normal form: h == u * m with u unimodular.
///
/// `h` is in row echelon form; every pivot is positive and the entries above
/// a pivot lie in [0, pivot). Zero rows are at the bottom. `pivots[r]` is the
/// pivot column of row r for r < rank.
struct HermiteForm {
  IntMatrix h;
  IntMatrix u;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

HermiteForm hnf(const IntMatrix& m);

struct NoSolution {
  friend bool operator==(NoSolution, NoSolution) { return true; }
};
struct NonUnique {
  friend bool operator==(NonUnique, NonUnique) { return true; }
};

using SolveResult = std::variant<std::vector<Integer>, NoSolution, NonUnique>;

/// Solves a * x == b over the integers.
///
/// Returns the solution when exactly one integer vector satisfies the system,
/// NoSolution when none does, and NonUnique when there are several (the
/// integer kernel of `a` is then nontrivial). A system with zero columns has
/// the empty vector as its unique solution iff b == 0.
SolveResult solve_unique(const IntMatrix& a, std::span<const Integer> b);

/// Rank over the rationals.
std::size_t rank(const IntMatrix& m);

/// Inverse over the integers, or nullopt when m is not square unimodular.
std::optional<IntMatrix> inverse(const IntMatrix& m);

}  // namespace strata
