#pragma once

#include <cstdint>
#include <vector>

#include "acnet/linalg.hpp"

namespace acnet {

/// Principal-submatrix index set J, 1-based and strictly increasing.
struct SubmatrixIndex {
  std::vector<int> indices;

  std::size_t size() const { return indices.size(); }
  std::vector<int> zero_based() const;
  friend bool operator==(const SubmatrixIndex&, const SubmatrixIndex&) = default;
  friend auto operator<=>(const SubmatrixIndex&, const SubmatrixIndex&) = default;
};

struct SubmatrixViolation {
  SubmatrixIndex index;
  double min_eigenvalue = 0.0;
  std::vector<double> min_eigenvector;  // unit norm, sign fixed
};

/// All m×m principal submatrices of w whose smallest eigenvalue is <= -eps_psd,
/// in lexicographic order of J. OpenMP-parallel over subsets.
std::vector<SubmatrixViolation> violated_submatrices(const SymMatrix& w, int m, double eps_psd);

/// Single-threaded reference implementation of violated_submatrices.
std::vector<SubmatrixViolation> violated_submatrices_serial(const SymMatrix& w, int m, double eps_psd);

/// Number of m-subsets of {1..n}.
std::uint64_t binomial(int n, int m);

/// The r-th (0-based) m-subset of {1..n} in lexicographic order.
SubmatrixIndex unrank_subset(int n, int m, std::uint64_t rank);

}  // namespace acnet
