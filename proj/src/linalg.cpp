#include "acnet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace acnet {

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : n_(rows.size()), a_(n_ * n_, 0.0) {
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != n_) throw LinalgError("SymMatrix: rows must form a square matrix");
    std::copy(row.begin(), row.end(), a_.begin() + static_cast<std::ptrdiff_t>(r * n_));
    ++r;
  }
}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  if (o.n_ != n_) throw LinalgError("SymMatrix: size mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  if (o.n_ != n_) throw LinalgError("SymMatrix: size mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (double& v : a_) v *= s;
  return *this;
}

SymMatrix SymMatrix::operator*(const SymMatrix& o) const {
  if (o.n_ != n_) throw LinalgError("SymMatrix: size mismatch");
  SymMatrix out(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < n_; ++k) {
      const double aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n_; ++j) out(i, j) += aik * o(k, j);
    }
  return out;
}

std::vector<double> SymMatrix::apply(std::span<const double> v) const {
  if (v.size() != n_) throw LinalgError("SymMatrix::apply: size mismatch");
  std::vector<double> out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

double SymMatrix::quadratic_form(std::span<const double> v) const {
  const auto av = apply(v);
  return std::inner_product(av.begin(), av.end(), v.begin(), 0.0);
}

SymMatrix SymMatrix::principal(std::span<const int> rows0) const {
  SymMatrix out(rows0.size());
  for (std::size_t a = 0; a < rows0.size(); ++a)
    for (std::size_t b = 0; b < rows0.size(); ++b)
      out(a, b) = (*this)(static_cast<std::size_t>(rows0[a]), static_cast<std::size_t>(rows0[b]));
  return out;
}

double SymMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
  return worst;
}

double SymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

std::vector<double> EigenDecomposition::vector(std::size_t k) const {
  std::vector<double> v(vectors.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = vectors(i, k);
  return v;
}

void fix_sign(std::span<double> v, double tol) {
  for (double x : v) {
    if (std::abs(x) > tol) {
      if (x < 0)
        for (double& y : v) y = -y;
      return;
    }
  }
}

EigenDecomposition sym_eigen(const SymMatrix& input, JacobiOptions opts) {
  const std::size_t n = input.size();
  if (input.max_asymmetry() > 1e-10 * std::max(1.0, input.frobenius_norm()))
    throw LinalgError("sym_eigen: matrix is not symmetric");

  SymMatrix a = input;
  // symmetrize exactly so rotations act on one triangle consistently
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));
  SymMatrix v = SymMatrix::identity(n);

  const double scale = std::max(a.frobenius_norm(), 1e-300);
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
    if (std::sqrt(off) <= opts.off_tolerance * scale) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = SymMatrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = v(i, order[k]);
    fix_sign(col);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = col[i];
  }
  return out;
}

FiedlerPair algebraic_connectivity(const SymMatrix& l) {
  const std::size_t n = l.size();
  if (n < 2) throw LinalgError("algebraic_connectivity: need at least two nodes");
  const double scale = std::max(1.0, l.frobenius_norm());
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += l(i, j);
    if (std::abs(row) > 1e-9 * scale)
      throw LinalgError("algebraic_connectivity: rows do not sum to zero");
  }
  auto eig = sym_eigen(l);
  if (eig.values.front() < -1e-9 * scale)
    throw LinalgError("algebraic_connectivity: matrix is not positive semidefinite");

  // The all-ones direction is an exact null vector; deflate it from the
  // eigenvector of the second eigenvalue in case λ2 = 0 is degenerate with it.
  FiedlerPair out;
  out.lambda2 = eig.values[1];
  std::vector<double> v = eig.vector(1);
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  for (double& x : v) x -= mean;
  double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  if (norm < 1e-8) {
    // λ1 and λ2 both zero and the solver mixed them; fall back to the first vector.
    v = eig.vector(0);
    const double m0 = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
    for (double& x : v) x -= m0;
    norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  }
  for (double& x : v) x /= norm;
  fix_sign(v);
  out.fiedler = std::move(v);
  return out;
}

SymMatrix psd_function(const SymMatrix& a, PsdFunction f) {
  const auto eig = sym_eigen(a);
  const std::size_t n = a.size();
  const double scale = std::max(1.0, std::abs(eig.values.back()));
  std::vector<double> mapped(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = eig.values[k];
    switch (f) {
      case PsdFunction::inverse:
      case PsdFunction::inv_sqrt:
        if (lam <= 1e-14 * scale) throw LinalgError("psd_function: matrix is singular or indefinite");
        mapped[k] = f == PsdFunction::inverse ? 1.0 / lam : 1.0 / std::sqrt(lam);
        break;
      case PsdFunction::sqrt:
        if (lam < -1e-12 * scale) throw LinalgError("psd_function: matrix is indefinite");
        mapped[k] = std::sqrt(std::max(lam, 0.0));
        break;
    }
  }
  SymMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += eig.vectors(i, k) * mapped[k] * eig.vectors(j, k);
      out(i, j) = s;
    }
  return out;
}

double spectral_norm(const SymMatrix& a) {
  const auto eig = sym_eigen(a);
  return std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
}

double min_eigenvalue(const SymMatrix& a) { return sym_eigen(a).values.front(); }

}  // namespace acnet
