#pragma once

// Dense symmetric eigensolver: Householder reduction to tridiagonal form
// followed by the implicit-shift QL iteration (EISPACK tred2/tql2 lineage).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "percobound/error.hpp"
#include "percobound/matrix.hpp"

namespace percobound {

struct SpectralResult {
  std::vector<double> eigenvalues;  // ascending
  // Column k holds the unit eigenvector for eigenvalues[k]; empty unless requested.
  std::optional<Matrix> eigenvectors;
  // max_k ||M v_k - mu_k v_k||_2, zero when vectors were not requested.
  double max_residual = 0.0;
};

namespace detail {

// Householder tridiagonalization. On entry v holds the symmetric matrix; on
// exit d/e hold the tridiagonal diagonal and subdiagonal (e[0] unused) and, if
// accumulate is set, v holds the orthogonal transformation.
inline void tridiagonalize(Matrix& v, std::vector<double>& d, std::vector<double>& e,
                           bool accumulate) {
  const std::size_t n = v.size();
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);

    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  if (accumulate) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      v(n - 1, i) = v(i, i);
      v(i, i) = 1.0;
      const double h = d[i + 1];
      if (h != 0.0) {
        for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
        for (std::size_t j = 0; j <= i; ++j) {
          double g = 0.0;
          for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
          for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
        }
      }
      for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
      d[j] = v(n - 1, j);
      v(n - 1, j) = 0.0;
    }
    v(n - 1, n - 1) = 1.0;
  } else {
    // The reduced diagonal is left on the diagonal of v.
    for (std::size_t j = 0; j < n; ++j) d[j] = v(j, j);
  }
  e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e). Rotations are applied to v
// when accumulate is set.
inline void tridiagonal_ql(Matrix& v, std::vector<double>& d, std::vector<double>& e,
                           bool accumulate) {
  const std::size_t n = d.size();
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = 0x1.0p-52;
  constexpr int kMaxSweeps = 64;

  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m == n) m = n - 1;

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > kMaxSweeps) throw Error("symmetric eigensolver failed to converge");

        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0;
        double c2 = c;
        double c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0;
        double s2 = 0.0;
        for (std::size_t i = m; i-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          if (accumulate) {
            for (std::size_t k = 0; k < n; ++k) {
              h = v(k, i + 1);
              v(k, i + 1) = s * v(k, i) + c * h;
              v(k, i) = c * v(k, i) - s * h;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

inline void require_symmetric(const Matrix& m) {
  const double scale = m.max_abs();
  if (m.asymmetry() > 1e-10 * scale)
    throw ContractViolation("eig_sym: input matrix is not symmetric");
}

}  // namespace detail

// All eigenvalues of a symmetric matrix, ascending. Eigenvectors are computed
// only on request; connectivity and bound computations never need them.
inline SpectralResult eig_sym(const Matrix& m, bool want_vectors = false) {
  const std::size_t n = m.size();
  if (n == 0) throw ContractViolation("eig_sym: empty matrix");
  detail::require_symmetric(m);

  Matrix v(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) v(i, j) = 0.5 * (m(i, j) + m(j, i));

  std::vector<double> d(n), e(n);
  detail::tridiagonalize(v, d, e, want_vectors);
  detail::tridiagonal_ql(v, d, e, want_vectors);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  SpectralResult out;
  out.eigenvalues.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.eigenvalues[k] = d[order[k]];

  if (want_vectors) {
    Matrix vecs(n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) vecs(i, k) = v(i, order[k]);

    double worst = 0.0;
    std::vector<double> col(n);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) col[i] = vecs(i, k);
      const std::vector<double> mv = m.multiply(col);
      double r2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double diff = mv[i] - out.eigenvalues[k] * col[i];
        r2 += diff * diff;
      }
      worst = std::max(worst, std::sqrt(r2));
    }
    out.eigenvectors = std::move(vecs);
    out.max_residual = worst;
  }
  return out;
}

inline double spectral_norm(const SpectralResult& r) {
  return std::max(std::abs(r.eigenvalues.front()), std::abs(r.eigenvalues.back()));
}

inline double spectral_norm(const Matrix& m) { return spectral_norm(eig_sym(m)); }

// Largest singular value of a general square matrix, via the symmetric
// dilation [[0, M], [M^T, 0]] whose eigenvalues are +/- the singular values.
inline double operator_norm(const Matrix& m) {
  const std::size_t n = m.size();
  Matrix dil(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      dil(i, n + j) = m(i, j);
      dil(n + j, i) = m(i, j);
    }
  return spectral_norm(dil);
}

// Second-smallest eigenvalue with multiplicity.
inline double lambda2(const SpectralResult& r) {
  if (r.eigenvalues.size() < 2)
    throw ContractViolation("lambda2 is undefined for matrices smaller than 2x2");
  return r.eigenvalues[1];
}

inline double lambda2(const Matrix& m) {
  if (m.size() < 2)
    throw ContractViolation("lambda2 is undefined for matrices smaller than 2x2");
  return lambda2(eig_sym(m));
}

}  // namespace percobound
