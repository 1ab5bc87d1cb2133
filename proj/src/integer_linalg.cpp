#include "strata/integer_linalg.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

namespace strata {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("IntMatrix: ragged initializer");
    for (long v : r) entries_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool IntMatrix::is_zero() const {
  for (const auto& e : entries_)
    if (e != 0) return false;
  return true;
}

void IntMatrix::set_block(std::size_t r0, std::size_t c0, const IntMatrix& block) {
  if (r0 + block.rows() > rows_ || c0 + block.cols() > cols_)
    throw std::out_of_range("IntMatrix::set_block: block does not fit");
  for (std::size_t r = 0; r < block.rows(); ++r)
    for (std::size_t c = 0; c < block.cols(); ++c) (*this)(r0 + r, c0 + c) = block(r, c);
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  for (std::size_t i = 0; i < a.entries_.size(); ++i)
    if (a.entries_[i] != b.entries_[i]) return false;
  return true;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("IntMatrix product: shape mismatch");
  IntMatrix p(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Integer& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) p(i, j) += aik * b(k, j);
    }
  return p;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("IntMatrix sum: shape mismatch");
  IntMatrix s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = a(i, j) + b(i, j);
  return s;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("IntMatrix difference: shape mismatch");
  IntMatrix s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = a(i, j) - b(i, j);
  return s;
}

std::vector<Integer> operator*(const IntMatrix& a, std::span<const Integer> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("IntMatrix-vector product: shape mismatch");
  std::vector<Integer> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) y[i] += a(i, k) * x[k];
  return y;
}

std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (r) os << ", ";
    os << '[';
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) os << ", ";
      os << m(r, c).get_str();
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(a, c), m(b, c));
}

void negate_row(IntMatrix& m, std::size_t r) {
  for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = -m(r, c);
}

// (row_a, row_b) <- (s*row_a + t*row_b, p*row_a + q*row_b)
void combine_rows(IntMatrix& m, std::size_t a, std::size_t b, const Integer& s, const Integer& t,
                  const Integer& p, const Integer& q) {
  for (std::size_t c = 0; c < m.cols(); ++c) {
    Integer ra = m(a, c);
    Integer rb = m(b, c);
    m(a, c) = s * ra + t * rb;
    m(b, c) = p * ra + q * rb;
  }
}

// row_a -= f * row_b
void subtract_multiple(IntMatrix& m, std::size_t a, std::size_t b, const Integer& f) {
  for (std::size_t c = 0; c < m.cols(); ++c) m(a, c) -= f * m(b, c);
}

}  // namespace

HermiteForm hnf(const IntMatrix& m) {
  HermiteForm out{m, IntMatrix::identity(m.rows()), 0, {}};
  IntMatrix& h = out.h;
  IntMatrix& u = out.u;
  const std::size_t rows = m.rows();
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < rows; ++c) {
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (h(i, c) == 0) continue;
      if (h(r, c) == 0) {
        swap_rows(h, r, i);
        swap_rows(u, r, i);
        continue;
      }
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), h(r, c).get_mpz_t(),
                 h(i, c).get_mpz_t());
      Integer a = h(r, c) / g;
      Integer b = h(i, c) / g;
      // [[s, t], [-b, a]] has determinant s*a + t*b == 1.
      Integer nb = -b;
      combine_rows(h, r, i, s, t, nb, a);
      combine_rows(u, r, i, s, t, nb, a);
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      negate_row(h, r);
      negate_row(u, r);
    }
    for (std::size_t k = 0; k < r; ++k) {
      if (h(k, c) == 0) continue;
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), h(k, c).get_mpz_t(), h(r, c).get_mpz_t());
      if (q == 0) continue;
      subtract_multiple(h, k, r, q);
      subtract_multiple(u, k, r, q);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  return out;
}

SolveResult solve_unique(const IntMatrix& a, std::span<const Integer> b) {
  if (a.rows() != b.size()) throw std::invalid_argument("solve_unique: b has wrong length");
  const std::size_t n = a.cols();
  if (n == 0) {
    for (const auto& v : b)
      if (v != 0) return NoSolution{};
    return std::vector<Integer>{};
  }

  // With h == u * a^T we have a == h^T * u^{-T}; substitute x = u^T * y.
  const HermiteForm f = hnf(a.transpose());
  const IntMatrix& h = f.h;
  std::vector<Integer> y(n);
  for (std::size_t l = 0; l < f.rank; ++l) {
    const std::size_t p = f.pivots[l];
    Integer rest = b[p];
    for (std::size_t k = 0; k < l; ++k) rest -= h(k, p) * y[k];
    if (!mpz_divisible_p(rest.get_mpz_t(), h(l, p).get_mpz_t())) return NoSolution{};
    mpz_divexact(y[l].get_mpz_t(), rest.get_mpz_t(), h(l, p).get_mpz_t());
  }
  for (std::size_t k = 0; k < b.size(); ++k) {
    Integer v = 0;
    for (std::size_t l = 0; l < f.rank; ++l) v += h(l, k) * y[l];
    if (v != b[k]) return NoSolution{};
  }
  if (f.rank < n) return NonUnique{};

  std::vector<Integer> x(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l) x[i] += f.u(l, i) * y[l];
  return x;
}

std::size_t rank(const IntMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  return hnf(m).rank;
}

std::optional<IntMatrix> inverse(const IntMatrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  HermiteForm f = hnf(m);
  if (f.h != IntMatrix::identity(m.rows())) return std::nullopt;
  return std::move(f.u);
}

}  // namespace strata
