#pragma once

// Reproduction harnesses: the lossless round-trip trial (mean MAEs of U, V and
// X_hat against their E-SVD reconstructions) and the fixed-budget simulation
// comparing plain SVD with E-SVD at their maximal ranks.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "esvd/imageio.hpp"
#include "esvd/matrix.hpp"
#include "esvd/random.hpp"

namespace esvd {

struct LosslessConfig {
  std::size_t count = 25;
  std::size_t size = 375;
  std::vector<std::size_t> ranks{50, 100, 150, 200, 250, 300};
  /// Entry range of the synthetic matrices (normalized intensities).
  double lo = 0.0;
  double hi = 1.0;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct LosslessRow {
  std::size_t l = 0;
  double mae_u = 0.0;     // mean MAE(U, U^E)
  double mae_v = 0.0;     // mean MAE(V, V^E)
  double mae_xhat = 0.0;  // mean MAE(X_hat, X_hat^E)
  double mae_x = 0.0;     // mean MAE(X, X_hat^E)
};

/// `count` seeded uniform size x size matrices.
std::vector<DenseMatrix> synthetic_trial_matrices(const LosslessConfig& cfg);

/// Seeded random size x size crops of every channel of every image.
/// Throws ShapeError when an image is smaller than the crop.
std::vector<DenseMatrix> image_trial_matrices(const std::vector<ImagePlanes>& images,
                                              std::size_t size, std::uint64_t seed);

std::vector<LosslessRow> run_lossless_trial(const std::vector<DenseMatrix>& sources,
                                            const std::vector<std::size_t>& ranks,
                                            unsigned threads = 0);

void write_lossless_csv(std::ostream& os, const std::vector<LosslessRow>& rows);

struct SimulationConfig {
  std::size_t m = 100;
  std::size_t n = 150;
  double lo = 0.0;
  double hi = 100.0;
  std::uint64_t budget_from = 1000;
  std::uint64_t budget_to = 15000;
  std::uint64_t budget_step = 500;
  std::size_t repetitions = 50;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 0;

  /// Throws Usage / BudgetOutOfRange.
  void validate() const;
  std::vector<std::uint64_t> budgets() const;
};

struct ExperimentRow {
  std::uint64_t budget = 0;
  std::size_t l_svd_max = 0;
  std::size_t l_esvd_max = 0;
  double rho_svd_mean = 0.0;
  double rho_esvd_mean = 0.0;
  double p_svd_mean = 0.0;
  double p_esvd_mean = 0.0;
  /// min over repetitions of rho_esvd - rho_svd.
  double min_rho_gap = 0.0;
};

std::vector<ExperimentRow> run_simulation(const SimulationConfig& cfg);

void write_simulation_csv(std::ostream& os, const std::vector<ExperimentRow>& rows);

/// Entries of one simulation matrix against both reconstructions at `budget`;
/// columns x, xhat_svd, xhat_esvd.
void write_simulation_scatter_csv(std::ostream& os, const SimulationConfig& cfg,
                                  std::uint64_t budget);

}  // namespace esvd
