#pragma once

// Storage-budget arithmetic for SVD versus E-SVD.
//
// One storage unit is one 64-bit number. Plain truncated SVD of rank l stores
// (m + n + 1) l units; E-SVD stores (m + n - l) l.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

namespace esvd {

struct StorageReport {
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  std::uint64_t l = 0;
  std::uint64_t n_svd = 0;   // (m + n + 1) l
  std::uint64_t d_esvd = 0;  // (m + n - l) l
  double sr_svd = 0.0;       // 1 - n_svd / (m n)
  double sr_esvd = 0.0;      // 1 - d_esvd / (m n)
  double sr_hat = 0.0;       // (m + n - l) / (m + n + 1)
  std::uint64_t l0 = 0;      // floor(m n / (m + n + 1))
};

struct BudgetReport {
  std::uint64_t budget = 0;
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  std::uint64_t l_svd_max = 0;
  std::uint64_t l_esvd_max = 0;
  /// l_esvd_max / l_svd_max, present when l_svd_max >= 1.
  std::optional<double> ratio;
};

/// Rank at which plain SVD stops saving storage.
std::uint64_t svd_failure_rank(std::uint64_t m, std::uint64_t n);

/// Throws RankOutOfRange unless 1 <= l <= min(m, n).
StorageReport storage_report(std::uint64_t m, std::uint64_t n, std::uint64_t l);

/// Largest l <= min(m, n) with (m + n - l) l <= (m + n + 1) l_svd.
std::uint64_t l_esvd_given_lsvd(std::uint64_t m, std::uint64_t n, std::uint64_t l_svd);

/// Maximal ranks fitting `budget` storage units; throws BudgetOutOfRange
/// unless 1 <= budget <= m n.
BudgetReport budget_report(std::uint64_t budget, std::uint64_t m, std::uint64_t n);

/// sr_hat(m, m, l0(m, m)) for each size in `sizes`.
std::vector<double> sr_hat_limit_probe(const std::vector<std::uint64_t>& sizes);

// CSV emitters for the comparison curves.
void write_sr_curve_csv(std::ostream& os, std::uint64_t m, std::uint64_t n);
void write_rank_curve_csv(std::ostream& os, std::uint64_t m, std::uint64_t n);
void write_budget_sweep_csv(std::ostream& os, std::uint64_t m, std::uint64_t n,
                            std::uint64_t from, std::uint64_t to, std::uint64_t step);

}  // namespace esvd
