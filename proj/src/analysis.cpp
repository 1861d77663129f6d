#include "esvd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "esvd/matrix_io.hpp"
#include "esvd/error.hpp"

namespace esvd {
namespace {

using u128 = unsigned __int128;

u128 esvd_units(std::uint64_t m, std::uint64_t n, std::uint64_t l) {
  return static_cast<u128>(m + n - l) * l;
}

void require_dims(std::uint64_t m, std::uint64_t n) {
  if (m < 1 || n < 1) fail(ErrorCode::ShapeError, "matrix dimensions must be positive");
}

// Largest l <= min(m, n) with (m + n - l) l <= units. The left side is
// increasing on [0, (m + n) / 2], which contains the whole rank range, so the
// floored smaller root of the quadratic is the answer; exact integer checks
// absorb rounding in the square root.
std::uint64_t max_esvd_rank(std::uint64_t m, std::uint64_t n, u128 units) {
  const std::uint64_t cap = std::min(m, n);
  const double s = static_cast<double>(m + n);
  const double disc = s * s - 4.0 * static_cast<double>(units);
  std::uint64_t l = cap;
  if (disc > 0.0) {
    const double root = std::floor((s - std::sqrt(disc)) / 2.0);
    l = root <= 0.0 ? 0 : std::min<std::uint64_t>(cap, static_cast<std::uint64_t>(root));
  }
  while (l < cap && esvd_units(m, n, l + 1) <= units) ++l;
  while (l > 0 && esvd_units(m, n, l) > units) --l;
  return l;
}

}  // namespace

std::uint64_t svd_failure_rank(std::uint64_t m, std::uint64_t n) {
  require_dims(m, n);
  return static_cast<std::uint64_t>(static_cast<u128>(m) * n / (m + n + 1));
}

StorageReport storage_report(std::uint64_t m, std::uint64_t n, std::uint64_t l) {
  require_dims(m, n);
  if (l < 1 || l > std::min(m, n)) {
    std::ostringstream os;
    os << "rank " << l << " outside [1, " << std::min(m, n) << "]";
    fail(ErrorCode::RankOutOfRange, os.str());
  }
  StorageReport r;
  r.m = m;
  r.n = n;
  r.l = l;
  r.n_svd = (m + n + 1) * l;
  r.d_esvd = (m + n - l) * l;
  const double total = static_cast<double>(m) * static_cast<double>(n);
  r.sr_svd = 1.0 - static_cast<double>(r.n_svd) / total;
  r.sr_esvd = 1.0 - static_cast<double>(r.d_esvd) / total;
  r.sr_hat = static_cast<double>(m + n - l) / static_cast<double>(m + n + 1);
  r.l0 = svd_failure_rank(m, n);
  return r;
}

std::uint64_t l_esvd_given_lsvd(std::uint64_t m, std::uint64_t n, std::uint64_t l_svd) {
  require_dims(m, n);
  if (l_svd < 1 || l_svd > std::min(m, n)) {
    std::ostringstream os;
    os << "l_svd " << l_svd << " outside [1, " << std::min(m, n) << "]";
    fail(ErrorCode::RankOutOfRange, os.str());
  }
  return max_esvd_rank(m, n, static_cast<u128>(m + n + 1) * l_svd);
}

BudgetReport budget_report(std::uint64_t budget, std::uint64_t m, std::uint64_t n) {
  require_dims(m, n);
  if (budget < 1 || static_cast<u128>(budget) > static_cast<u128>(m) * n) {
    std::ostringstream os;
    os << "budget " << budget << " outside [1, " << m << "*" << n << "]";
    fail(ErrorCode::BudgetOutOfRange, os.str());
  }
  BudgetReport r;
  r.budget = budget;
  r.m = m;
  r.n = n;
  r.l_svd_max = std::min(budget / (m + n + 1), std::min(m, n));
  r.l_esvd_max = max_esvd_rank(m, n, budget);
  if (r.l_svd_max >= 1) {
    r.ratio = static_cast<double>(r.l_esvd_max) / static_cast<double>(r.l_svd_max);
  }
  return r;
}

std::vector<double> sr_hat_limit_probe(const std::vector<std::uint64_t>& sizes) {
  std::vector<double> out;
  out.reserve(sizes.size());
  for (std::uint64_t m : sizes) {
    const std::uint64_t l0 = svd_failure_rank(m, m);
    out.push_back(static_cast<double>(2 * m - l0) / static_cast<double>(2 * m + 1));
  }
  return out;
}

void write_sr_curve_csv(std::ostream& os, std::uint64_t m, std::uint64_t n) {
  os << "l,n_svd,d_esvd,sr_svd,sr_esvd,sr_hat\n";
  for (std::uint64_t l = 1; l <= std::min(m, n); ++l) {
    const StorageReport r = storage_report(m, n, l);
    os << l << ',' << r.n_svd << ',' << r.d_esvd << ',' << format_double(r.sr_svd) << ','
       << format_double(r.sr_esvd) << ',' << format_double(r.sr_hat) << '\n';
  }
}

void write_rank_curve_csv(std::ostream& os, std::uint64_t m, std::uint64_t n) {
  os << "l_svd,l_esvd\n";
  for (std::uint64_t l = 1; l <= std::min(m, n); ++l) {
    os << l << ',' << l_esvd_given_lsvd(m, n, l) << '\n';
  }
}

void write_budget_sweep_csv(std::ostream& os, std::uint64_t m, std::uint64_t n,
                            std::uint64_t from, std::uint64_t to, std::uint64_t step) {
  if (step == 0) fail(ErrorCode::Usage, "budget sweep step must be positive");
  os << "M,l_svd_max,l_esvd_max,ratio\n";
  for (std::uint64_t budget = from; budget <= to; budget += step) {
    const BudgetReport r = budget_report(budget, m, n);
    os << budget << ',' << r.l_svd_max << ',' << r.l_esvd_max << ','
       << (r.ratio ? format_double(*r.ratio) : std::string{}) << '\n';
  }
}

}  // namespace esvd
