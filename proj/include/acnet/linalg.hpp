#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace acnet {

class LinalgError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense square matrix, row-major. Used for symmetric data (Laplacians, the
/// lifted W matrix, covariances); symmetry is checked where it matters.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(std::span<const double> d);

  std::size_t size() const { return n_; }
  double& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }
  std::span<const double> data() const { return a_; }

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double s);
  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

  /// Plain matrix product (result need not be symmetric in general).
  SymMatrix operator*(const SymMatrix& o) const;
  std::vector<double> apply(std::span<const double> v) const;
  double quadratic_form(std::span<const double> v) const;

  SymMatrix principal(std::span<const int> rows0) const;
  double max_asymmetry() const;
  double frobenius_norm() const;

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  SymMatrix vectors;           // column k pairs with values[k]

  std::vector<double> vector(std::size_t k) const;
};

struct JacobiOptions {
  double off_tolerance = 1e-12;  // relative off-diagonal Frobenius threshold
  int max_sweeps = 100;
};

/// Cyclic Jacobi eigensolver. Throws on asymmetric input (tolerance 1e-10).
EigenDecomposition sym_eigen(const SymMatrix& a, JacobiOptions opts = {});

struct FiedlerPair {
  double lambda2 = 0.0;
  std::vector<double> fiedler;  // unit norm, orthogonal to 1, first nonzero entry positive
};

/// λ2 and Fiedler vector of a Laplacian. Throws if row sums or PSD-ness fail
/// beyond a scale-relative tolerance.
FiedlerPair algebraic_connectivity(const SymMatrix& laplacian);

enum class PsdFunction { inverse, sqrt, inv_sqrt };

SymMatrix psd_function(const SymMatrix& a, PsdFunction f);
double spectral_norm(const SymMatrix& a);
double min_eigenvalue(const SymMatrix& a);

/// Flip v so its first entry with |v_k| > tol is positive.
void fix_sign(std::span<double> v, double tol = 1e-12);

}  // namespace acnet
