#include "carnot/matrix.hpp"

#include <utility>

namespace carnot {

namespace {

using IntMatrix = std::vector<std::vector<mpz_class>>;

IntMatrix clear_denominators(const Matrix<Rational>& m) {
  IntMatrix out(m.rows(), std::vector<mpz_class>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    mpz_class lcm = 1;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m(r, c).get_den_mpz_t());
    }
    for (std::size_t c = 0; c < m.cols(); ++c) {
      out[r][c] = m(r, c).get_num() * (lcm / m(r, c).get_den());
    }
  }
  return out;
}

struct BareissResult {
  std::size_t rank = 0;
  mpz_class last_pivot = 1;
  int sign = 1;
};

// Runs Bareiss elimination in place. Full pivoting picks the nonzero entry of
// smallest magnitude in the trailing block, which keeps the integers short.
BareissResult bareiss(IntMatrix& a, std::size_t cols) {
  BareissResult res;
  const std::size_t rows = a.size();
  std::vector<std::size_t> col_order(cols);
  for (std::size_t c = 0; c < cols; ++c) col_order[c] = c;
  mpz_class prev = 1;
  for (std::size_t k = 0; k < rows && k < cols; ++k) {
    std::size_t best_r = rows;
    std::size_t best_c = cols;
    for (std::size_t r = k; r < rows; ++r) {
      for (std::size_t c = k; c < cols; ++c) {
        const mpz_class& v = a[r][col_order[c]];
        if (sgn(v) == 0) continue;
        if (best_r == rows || mpz_cmpabs(v.get_mpz_t(), a[best_r][col_order[best_c]].get_mpz_t()) < 0) {
          best_r = r;
          best_c = c;
        }
      }
    }
    if (best_r == rows) break;
    if (best_r != k) {
      std::swap(a[best_r], a[k]);
      res.sign = -res.sign;
    }
    if (best_c != k) {
      std::swap(col_order[best_c], col_order[k]);
      res.sign = -res.sign;
    }
    const mpz_class pivot = a[k][col_order[k]];
    for (std::size_t r = k + 1; r < rows; ++r) {
      const mpz_class factor = a[r][col_order[k]];
      for (std::size_t c = k + 1; c < cols; ++c) {
        mpz_class& target = a[r][col_order[c]];
        target = pivot * target - factor * a[k][col_order[c]];
        mpz_divexact(target.get_mpz_t(), target.get_mpz_t(), prev.get_mpz_t());
      }
      a[r][col_order[k]] = 0;
    }
    prev = pivot;
    ++res.rank;
  }
  res.last_pivot = prev;
  return res;
}

}  // namespace

std::size_t exact_rank(const Matrix<Rational>& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  IntMatrix a = clear_denominators(m);
  return bareiss(a, m.cols()).rank;
}

Rational exact_determinant(const Matrix<Rational>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  if (m.rows() == 0) return 1;
  Rational scale = 1;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    mpz_class lcm = 1;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m(r, c).get_den_mpz_t());
    }
    scale *= Rational(lcm);
  }
  IntMatrix a = clear_denominators(m);
  BareissResult res = bareiss(a, m.cols());
  if (res.rank < m.rows()) return 0;
  Rational det(res.last_pivot * res.sign);
  return det / scale;
}

Matrix<Rational> exact_inverse(const Matrix<Rational>& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("inverse of a non-square matrix");
  Matrix<Rational> a = m;
  Matrix<Rational> inv = Matrix<Rational>::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && sgn(a(pivot, k)) == 0) ++pivot;
    if (pivot == n) throw std::domain_error("matrix is singular");
    if (pivot != k) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(pivot, c), a(k, c));
        std::swap(inv(pivot, c), inv(k, c));
      }
    }
    const Rational p = a(k, k);
    for (std::size_t c = 0; c < n; ++c) {
      a(k, c) /= p;
      inv(k, c) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == k || sgn(a(r, k)) == 0) continue;
      const Rational f = a(r, k);
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) -= f * a(k, c);
        inv(r, c) -= f * inv(k, c);
      }
    }
  }
  return inv;
}

Matrix<double> to_double(const Matrix<Rational>& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c).get_d();
  return out;
}

}  // namespace carnot
