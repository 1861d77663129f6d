#include "esvd/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "esvd/analysis.hpp"
#include "esvd/codec.hpp"
#include "esvd/matrix_io.hpp"
#include "esvd/error.hpp"
#include "esvd/metrics.hpp"
#include "esvd/svd.hpp"

namespace esvd {
namespace {

// Neumaier-compensated sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// Runs body(0..count) on a small thread pool. Tasks write to disjoint slots,
// so the result does not depend on scheduling.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

struct TrialSample {
  double mae_u, mae_v, mae_xhat, mae_x;
};

struct SimulationSample {
  double rho_svd, rho_esvd, p_svd, p_esvd;
};

}  // namespace

std::vector<DenseMatrix> synthetic_trial_matrices(const LosslessConfig& cfg) {
  const Rng root(cfg.seed);
  std::vector<DenseMatrix> out;
  out.reserve(cfg.count);
  for (std::size_t i = 0; i < cfg.count; ++i) {
    Rng rng = root.substream(i);
    out.push_back(random_uniform(cfg.size, cfg.size, cfg.lo, cfg.hi, rng));
  }
  return out;
}

std::vector<DenseMatrix> image_trial_matrices(const std::vector<ImagePlanes>& images,
                                              std::size_t size, std::uint64_t seed) {
  const Rng root(seed);
  std::vector<DenseMatrix> out;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const ImagePlanes& img = images[i];
    if (img.height < size || img.width < size) {
      fail(ErrorCode::ShapeError, "image " + std::to_string(i) + " is smaller than the " +
                                      std::to_string(size) + " crop");
    }
    Rng rng = root.substream(i);
    const auto top = static_cast<Eigen::Index>(rng.below(img.height - size + 1));
    const auto left = static_cast<Eigen::Index>(rng.below(img.width - size + 1));
    const auto s = static_cast<Eigen::Index>(size);
    for (const auto& plane : img.planes) out.push_back(plane.block(top, left, s, s));
  }
  return out;
}

std::vector<LosslessRow> run_lossless_trial(const std::vector<DenseMatrix>& sources,
                                            const std::vector<std::size_t>& ranks,
                                            unsigned threads) {
  if (sources.empty()) fail(ErrorCode::Usage, "lossless trial needs at least one matrix");
  std::vector<std::vector<TrialSample>> samples(sources.size());

  parallel_for(sources.size(), threads, [&](std::size_t s) {
    const DenseMatrix& x = sources[s];
    const TruncatedSvd full = thin_svd(x);
    for (std::size_t l : ranks) {
      const CompressResult packed = compress_factors(truncate(full, l));
      const TruncatedSvd restored = decompress_factors(packed.data);
      const DenseMatrix xhat = reconstruct(packed.factors);
      const DenseMatrix xhat_e = reconstruct(restored);
      samples[s].push_back({mae(packed.factors.u, restored.u), mae(packed.factors.v, restored.v),
                            mae(xhat, xhat_e), mae(x, xhat_e)});
    }
  });

  std::vector<LosslessRow> rows;
  for (std::size_t r = 0; r < ranks.size(); ++r) {
    CompensatedSum u, v, xh, x;
    for (const auto& per_source : samples) {
      u.add(per_source[r].mae_u);
      v.add(per_source[r].mae_v);
      xh.add(per_source[r].mae_xhat);
      x.add(per_source[r].mae_x);
    }
    const double count = static_cast<double>(samples.size());
    rows.push_back({ranks[r], u.value() / count, v.value() / count, xh.value() / count,
                    x.value() / count});
  }
  return rows;
}

void write_lossless_csv(std::ostream& os, const std::vector<LosslessRow>& rows) {
  os << "l,mae_u,mae_v,mae_xhat,mae_x\n";
  for (const auto& r : rows) {
    os << r.l << ',' << format_double(r.mae_u) << ',' << format_double(r.mae_v) << ','
       << format_double(r.mae_xhat) << ',' << format_double(r.mae_x) << '\n';
  }
}

void SimulationConfig::validate() const {
  if (m < 1 || n < 1 || repetitions < 1 || budget_step < 1 || budget_from > budget_to ||
      !(hi > lo)) {
    fail(ErrorCode::Usage, "invalid simulation configuration");
  }
  if (budget_from < m + n + 1 || budget_to > static_cast<std::uint64_t>(m) * n) {
    fail(ErrorCode::BudgetOutOfRange,
         "budget sweep must stay within [m + n + 1, m * n] so both methods keep rank >= 1");
  }
}

std::vector<std::uint64_t> SimulationConfig::budgets() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t b = budget_from; b <= budget_to; b += budget_step) out.push_back(b);
  return out;
}

std::vector<ExperimentRow> run_simulation(const SimulationConfig& cfg) {
  cfg.validate();
  const std::vector<std::uint64_t> budgets = cfg.budgets();
  std::vector<BudgetReport> reports;
  for (auto b : budgets) reports.push_back(budget_report(b, cfg.m, cfg.n));

  const std::size_t reps = cfg.repetitions;
  std::vector<SimulationSample> samples(budgets.size() * reps);
  const Rng root(cfg.seed);

  parallel_for(samples.size(), cfg.threads, [&](std::size_t task) {
    const BudgetReport& report = reports[task / reps];
    Rng rng = root.substream(task);
    const DenseMatrix x = random_uniform(cfg.m, cfg.n, cfg.lo, cfg.hi, rng);
    const TruncatedSvd full = thin_svd(x);
    const std::span<const double> spectrum(full.sigma.data(), static_cast<std::size_t>(full.sigma.size()));

    const DenseMatrix xhat_svd = reconstruct(truncate(full, report.l_svd_max));
    const CompressResult packed = compress_factors(truncate(full, report.l_esvd_max));
    const DenseMatrix xhat_esvd = decompress(packed.data);

    samples[task] = {pearson(x, xhat_svd), pearson(x, xhat_esvd),
                     coverage_p(spectrum, report.l_svd_max), coverage_p(spectrum, report.l_esvd_max)};
  });

  std::vector<ExperimentRow> rows;
  for (std::size_t b = 0; b < budgets.size(); ++b) {
    CompensatedSum rs, re, ps, pe;
    double gap = INFINITY;
    for (std::size_t r = 0; r < reps; ++r) {
      const SimulationSample& s = samples[b * reps + r];
      rs.add(s.rho_svd);
      re.add(s.rho_esvd);
      ps.add(s.p_svd);
      pe.add(s.p_esvd);
      gap = std::min(gap, s.rho_esvd - s.rho_svd);
    }
    const double count = static_cast<double>(reps);
    rows.push_back({budgets[b], static_cast<std::size_t>(reports[b].l_svd_max),
                    static_cast<std::size_t>(reports[b].l_esvd_max), rs.value() / count,
                    re.value() / count, ps.value() / count, pe.value() / count, gap});
  }
  return rows;
}

void write_simulation_csv(std::ostream& os, const std::vector<ExperimentRow>& rows) {
  os << "M,l_svd_max,l_esvd_max,rho_svd_mean,rho_esvd_mean,p_svd_mean,p_esvd_mean,min_rho_gap\n";
  for (const auto& r : rows) {
    os << r.budget << ',' << r.l_svd_max << ',' << r.l_esvd_max << ','
       << format_double(r.rho_svd_mean) << ',' << format_double(r.rho_esvd_mean) << ','
       << format_double(r.p_svd_mean) << ',' << format_double(r.p_esvd_mean) << ','
       << format_double(r.min_rho_gap) << '\n';
  }
}

void write_simulation_scatter_csv(std::ostream& os, const SimulationConfig& cfg,
                                  std::uint64_t budget) {
  const BudgetReport report = budget_report(budget, cfg.m, cfg.n);
  if (report.l_svd_max < 1) fail(ErrorCode::BudgetOutOfRange, "budget too small for plain SVD");
  // A stream id no sweep task can reach.
  Rng rng = Rng(cfg.seed).substream(~std::uint64_t{0});
  const DenseMatrix x = random_uniform(cfg.m, cfg.n, cfg.lo, cfg.hi, rng);
  const TruncatedSvd full = thin_svd(x);
  const DenseMatrix xhat_svd = reconstruct(truncate(full, report.l_svd_max));
  const DenseMatrix xhat_esvd = decompress(compress_factors(truncate(full, report.l_esvd_max)).data);

  os << "x,xhat_svd,xhat_esvd\n";
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      os << format_double(x(i, j)) << ',' << format_double(xhat_svd(i, j)) << ','
         << format_double(xhat_esvd(i, j)) << '\n';
}

}  // namespace esvd
