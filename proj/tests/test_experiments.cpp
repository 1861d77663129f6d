#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "esvd/analysis.hpp"
#include "esvd/experiments.hpp"
#include "test_support.hpp"

using namespace esvd;
using esvd::testing::code_of;

namespace {

SimulationConfig small_simulation() {
  SimulationConfig cfg;
  cfg.m = 12;
  cfg.n = 18;
  cfg.budget_from = 36;
  cfg.budget_to = 216;
  cfg.budget_step = 20;
  cfg.repetitions = 4;
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST_CASE("identity input at full rank is exact") {
  const auto rows = run_lossless_trial({DenseMatrix::Identity(2, 2)}, {2}, 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].l == 2);
  CHECK(rows[0].mae_u <= 1e-15);
  CHECK(rows[0].mae_v <= 1e-15);
  CHECK(rows[0].mae_xhat <= 1e-15);
  CHECK(rows[0].mae_x <= 1e-15);
}

TEST_CASE("small lossless trial") {
  LosslessConfig cfg;
  cfg.count = 3;
  cfg.size = 40;
  cfg.ranks = {5, 20, 40};
  cfg.threads = 2;
  const auto sources = synthetic_trial_matrices(cfg);
  REQUIRE(sources.size() == 3);
  CHECK(sources[0].rows() == 40);
  CHECK(sources[0].minCoeff() >= 0.0);
  CHECK(sources[0].maxCoeff() < 1.0);
  const auto rows = run_lossless_trial(sources, cfg.ranks, cfg.threads);
  REQUIRE(rows.size() == 3);
  for (const LosslessRow& r : rows) {
    CHECK(r.mae_u <= 1e-12);
    CHECK(r.mae_v <= 1e-12);
    CHECK(r.mae_xhat <= 1e-12);
  }
  CHECK(rows[2].mae_x <= 1e-9);
  CHECK(rows[0].mae_x > rows[1].mae_x);

  std::ostringstream os;
  write_lossless_csv(os, rows);
  CHECK(os.str().rfind("l,", 0) == 0);

  const auto serial = run_lossless_trial(sources, cfg.ranks, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(std::abs(serial[i].mae_xhat - rows[i].mae_xhat) <= 1e-12 * (1 + rows[i].mae_xhat));
  }
  CHECK(code_of([&] { run_lossless_trial(sources, {41}, 1); }) == ErrorCode::RankOutOfRange);
}

TEST_CASE("image crops are seeded") {
  ImagePlanes img{50, 45, 255, {DenseMatrix::Random(45, 50), DenseMatrix::Random(45, 50)}};
  const auto a = image_trial_matrices({img}, 30, 1);
  const auto b = image_trial_matrices({img}, 30, 1);
  REQUIRE(a.size() == 2);
  CHECK(a[0] == b[0]);
  CHECK(a[1] == b[1]);
  CHECK(code_of([&] { image_trial_matrices({img}, 46, 1); }) == ErrorCode::ShapeError);
}

TEST_CASE("small simulation invariants") {
  const SimulationConfig cfg = small_simulation();
  const auto rows = run_simulation(cfg);
  REQUIRE(rows.size() == cfg.budgets().size());
  for (const ExperimentRow& r : rows) {
    CAPTURE(r.budget);
    const BudgetReport b = budget_report(r.budget, cfg.m, cfg.n);
    CHECK(r.l_svd_max == b.l_svd_max);
    CHECK(r.l_esvd_max == b.l_esvd_max);
    CHECK(r.l_esvd_max >= r.l_svd_max);
    CHECK(r.p_esvd_mean >= r.p_svd_mean);
    if (r.l_esvd_max > r.l_svd_max) {
      CHECK(r.min_rho_gap > 0.0);
    } else {
      // Equal ranks give the same reconstruction up to rounding.
      CHECK(std::abs(r.min_rho_gap) <= 1e-12);
    }
  }
  CHECK(rows.back().budget == 216);
  CHECK(rows.back().p_esvd_mean == 1.0);
}

TEST_CASE("simulation output is deterministic and thread-count independent") {
  SimulationConfig cfg = small_simulation();
  std::ostringstream a, b, c;
  write_simulation_csv(a, run_simulation(cfg));
  write_simulation_csv(b, run_simulation(cfg));
  CHECK(a.str() == b.str());

  cfg.threads = 3;
  const auto parallel = run_simulation(cfg);
  cfg.threads = 1;
  const auto serial = run_simulation(cfg);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(std::abs(parallel[i].rho_svd_mean - serial[i].rho_svd_mean) <= 1e-12);
    CHECK(std::abs(parallel[i].p_esvd_mean - serial[i].p_esvd_mean) <= 1e-12);
  }

  cfg.seed += 1;
  write_simulation_csv(c, run_simulation(cfg));
  CHECK(a.str() != c.str());
}

TEST_CASE("simulation config validation") {
  SimulationConfig cfg = small_simulation();
  cfg.budget_to = 12 * 18 + 1;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::BudgetOutOfRange);
  cfg = small_simulation();
  cfg.budget_from = 30;  // below one SVD rank (m + n + 1 = 31)
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::BudgetOutOfRange);
  cfg = small_simulation();
  cfg.repetitions = 0;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::Usage);
  cfg = small_simulation();
  cfg.budget_step = 0;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::Usage);
}

TEST_CASE("scatter emitter") {
  const SimulationConfig cfg = small_simulation();
  std::ostringstream os;
  write_simulation_scatter_csv(os, cfg, 100);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,xhat_svd,xhat_esvd");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 12 * 18);
}
