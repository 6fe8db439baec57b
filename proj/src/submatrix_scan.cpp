#include "acnet/submatrix_scan.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace acnet {

std::vector<int> SubmatrixIndex::zero_based() const {
  std::vector<int> out(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) out[k] = indices[k] - 1;
  return out;
}

std::uint64_t binomial(int n, int m) {
  if (m < 0 || m > n) return 0;
  m = std::min(m, n - m);
  std::uint64_t r = 1;
  for (int k = 1; k <= m; ++k) r = r * static_cast<std::uint64_t>(n - m + k) / static_cast<std::uint64_t>(k);
  return r;
}

SubmatrixIndex unrank_subset(int n, int m, std::uint64_t rank) {
  SubmatrixIndex j;
  j.indices.reserve(static_cast<std::size_t>(m));
  int next = 1;
  for (int slot = 0; slot < m; ++slot) {
    for (int v = next; v <= n; ++v) {
      const std::uint64_t with_v = binomial(n - v, m - slot - 1);
      if (rank < with_v) {
        j.indices.push_back(v);
        next = v + 1;
        break;
      }
      rank -= with_v;
    }
  }
  return j;
}

namespace {

void check_size(const SymMatrix& w, int m, double eps_psd) {
  if (m < 1 || m > static_cast<int>(w.size()))
    throw LinalgError("violated_submatrices: size " + std::to_string(m) + " out of range");
  if (!(eps_psd > 0.0)) throw LinalgError("violated_submatrices: tolerance must be positive");
}

/// Smallest eigenpair of a principal submatrix; closed form for 1×1 and 2×2.
std::optional<SubmatrixViolation> test_subset(const SymMatrix& w, const SubmatrixIndex& j, double eps_psd) {
  const auto rows = j.zero_based();
  const std::size_t m = rows.size();
  if (m == 1) {
    const double d = w(static_cast<std::size_t>(rows[0]), static_cast<std::size_t>(rows[0]));
    if (d > -eps_psd) return std::nullopt;
    return SubmatrixViolation{j, d, {1.0}};
  }
  if (m == 2) {
    const auto r0 = static_cast<std::size_t>(rows[0]);
    const auto r1 = static_cast<std::size_t>(rows[1]);
    const double a = w(r0, r0);
    const double c = w(r1, r1);
    const double b = w(r0, r1);
    const double half_tr = 0.5 * (a + c);
    const double disc = std::hypot(0.5 * (a - c), b);
    const double lmin = half_tr - disc;
    if (lmin > -eps_psd) return std::nullopt;
    // Fall through to Jacobi for the eigenvector so sign and normalization
    // conventions match the general path.
  }
  const auto eig = sym_eigen(w.principal(rows));
  if (eig.values.front() > -eps_psd) return std::nullopt;
  return SubmatrixViolation{j, eig.values.front(), eig.vector(0)};
}

}  // namespace

std::vector<SubmatrixViolation> violated_submatrices_serial(const SymMatrix& w, int m, double eps_psd) {
  check_size(w, m, eps_psd);
  const int n = static_cast<int>(w.size());
  std::vector<SubmatrixViolation> out;
  SubmatrixIndex j;
  j.indices.resize(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) j.indices[static_cast<std::size_t>(k)] = k + 1;
  while (true) {
    if (auto hit = test_subset(w, j, eps_psd)) out.push_back(std::move(*hit));
    int pos = m - 1;
    while (pos >= 0 && j.indices[static_cast<std::size_t>(pos)] == n - m + pos + 1) --pos;
    if (pos < 0) break;
    ++j.indices[static_cast<std::size_t>(pos)];
    for (int q = pos + 1; q < m; ++q)
      j.indices[static_cast<std::size_t>(q)] = j.indices[static_cast<std::size_t>(q - 1)] + 1;
  }
  return out;
}

std::vector<SubmatrixViolation> violated_submatrices(const SymMatrix& w, int m, double eps_psd) {
  check_size(w, m, eps_psd);
  const int n = static_cast<int>(w.size());
  const auto total = static_cast<std::int64_t>(binomial(n, m));
  // Small scans are not worth a parallel region.
  if (total < 64) return violated_submatrices_serial(w, m, eps_psd);

  std::vector<std::optional<SubmatrixViolation>> slots(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < total; ++r) {
    slots[static_cast<std::size_t>(r)] = test_subset(w, unrank_subset(n, m, static_cast<std::uint64_t>(r)), eps_psd);
  }
  std::vector<SubmatrixViolation> out;
  for (auto& s : slots)
    if (s) out.push_back(std::move(*s));
  return out;
}

}  // namespace acnet
