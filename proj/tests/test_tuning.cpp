#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <vector>

#include "function_model.hpp"
#include "oracles.hpp"
#include "rdr/errors.hpp"
#include "rdr/estimator.hpp"
#include "rdr/models/sum.hpp"
#include "rdr/tuning.hpp"

using namespace rdr;

namespace {

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

const std::vector<double> kFigNu{20, 21, 13, 8, 7, 2, 0};

}  // namespace

TEST_CASE("lower hull examples") {
  const HullResult fig = lower_hull(CostProfile::linear(6), VarianceProfile::relaxed(kFigNu));
  CHECK(vec(fig.nu_prime.values()) == std::vector<double>{20, 16, 12, 8, 5, 2, 0});
  CHECK(fig.theta == std::vector<double>{-4, -4, -4, -3, -3, -2});
  CHECK(fig.support == std::vector<std::size_t>{0, 3, 5, 6});

  const HullResult convex = lower_hull(CostProfile::linear(3), VarianceProfile({5, 3, 1, 0}));
  CHECK(vec(convex.nu_prime.values()) == std::vector<double>{5, 3, 1, 0});

  const HullResult two = lower_hull(CostProfile::linear(2), VarianceProfile({4, 4, 0}));
  CHECK(vec(two.nu_prime.values()) == std::vector<double>{4, 2, 0});
  CHECK(two.theta == std::vector<double>{-2, -2});
}

TEST_CASE("lower hull properties on random profiles") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 1 + gen() % 20;
    const auto t = oracle::random_t(d, gen);
    std::vector<double> nu(d + 1, 0.0);
    for (std::size_t i = 0; i < d; ++i) nu[i] = trial % 2 == 0 ? u(gen) : std::floor(u(gen));
    const CostProfile tp(t);
    const HullResult h = lower_hull(tp, VarianceProfile::relaxed(nu));
    const auto brute = oracle::hull_brute(t, nu);
    const auto prime = vec(h.nu_prime.values());
    for (std::size_t i = 0; i <= d; ++i) {
      CHECK(prime[i] == doctest::Approx(brute[i]).epsilon(1e-9));
      CHECK(prime[i] <= nu[i]);
    }
    CHECK(prime.front() == nu.front());
    CHECK(prime.back() == 0.0);
    for (std::size_t s : h.support) CHECK(prime[s] == nu[s]);
    for (std::size_t i = 0; i + 1 < d; ++i) CHECK(h.theta[i] <= h.theta[i + 1] + 1e-12);
    for (std::size_t i = 0; i < d; ++i) {
      CHECK(h.theta[i] == doctest::Approx((prime[i + 1] - prime[i]) / (t[i + 1] - t[i])).epsilon(1e-9));
    }
    // Idempotence.
    const HullResult again = lower_hull(tp, h.nu_prime);
    const auto prime2 = vec(again.nu_prime.values());
    for (std::size_t i = 0; i <= d; ++i) CHECK(prime2[i] == doctest::Approx(prime[i]).epsilon(1e-12));
    if (*std::min_element(nu.begin(), nu.end() - 1) > 0) CHECK(h.theta[d - 1] < 0.0);
  }
}

TEST_CASE("optimal q on the worked instance") {
  const auto start = std::chrono::steady_clock::now();
  const OptimalQ best = optimal_q(CostProfile::linear(6), VarianceProfile::relaxed(kFigNu));
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::vector<double> expected{1, 1, 1, 0.86603, 0.86603, 0.70711};
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(best.q[i] - expected[i]) < 1e-5);
  const double closed = std::pow(2 + 2 + 2 + std::sqrt(3.0) + std::sqrt(3.0) + std::sqrt(2.0), 2);
  CHECK(std::abs(best.r - 118.34) < 0.01);
  CHECK(best.r == doctest::Approx(closed));
  CHECK(elapsed < 1e-3);
}

TEST_CASE("optimal q edge cases") {
  const OptimalQ lin = optimal_q(CostProfile::linear(4), VarianceProfile({4, 3, 2, 1, 0}));
  for (std::size_t i = 0; i < 4; ++i) CHECK(lin.q[i] == doctest::Approx(1.0));
  CHECK(lin.r == doctest::Approx(16.0));
  CHECK_THROWS_AS(optimal_q(CostProfile::linear(3), VarianceProfile({2, 0, 0, 0})), InvalidParameter);
  CHECK_THROWS_AS(optimal_q(CostProfile::linear(3), VarianceProfile({2, 1, 0})), InvalidParameter);
}

TEST_CASE("optimal q beats random q and satisfies complementary slackness") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 1 + gen() % 10;
    const auto t = oracle::random_t(d, gen);
    const auto nu = oracle::random_decreasing_nu(d, gen);
    const OptimalQ best = optimal_q(CostProfile(t), VarianceProfile(nu));
    const auto qs = vec(best.q.values());
    CHECK(best.r == doctest::Approx(oracle::r_functional(qs, t, nu)).epsilon(1e-9));
    for (int k = 0; k < 20; ++k) {
      CHECK(best.r <= oracle::r_functional(oracle::random_q(d, gen), t, nu) * (1 + 1e-12));
    }
    const auto prime = oracle::hull_brute(t, nu);
    for (std::size_t i = 1; i < d; ++i) {
      CHECK(std::abs((nu[i] - prime[i]) * (qs[i - 1] - qs[i])) < 1e-9);
    }
  }
}

TEST_CASE("grid search oracle") {
  const OptimalQ fig = grid_search_q(CostProfile::linear(6), VarianceProfile::relaxed(kFigNu), 40);
  CHECK(fig.r <= 118.34 * 1.02);
  CHECK(fig.r >= 118.33);

  const auto nu2 = VarianceProfile::relaxed({1, 1, 0});
  const OptimalQ g2 = grid_search_q(CostProfile::linear(2), nu2, 40);
  CHECK(g2.r <= optimal_q(CostProfile::linear(2), nu2).r * 1.02);

  const OptimalQ lin = grid_search_q(CostProfile::linear(4), VarianceProfile({4, 3, 2, 1, 0}), 20);
  for (std::size_t i = 0; i < 4; ++i) CHECK(lin.q[i] == 1.0);

  CHECK_THROWS_AS(grid_search_q(CostProfile::linear(7), VarianceProfile({7, 6, 5, 4, 3, 2, 1, 0}), 10),
                  InvalidParameter);
  CHECK_THROWS_AS(grid_search_q(CostProfile::linear(2), nu2, 51), InvalidParameter);
}

TEST_CASE("optimal q is no worse than the grid") {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = 1 + gen() % 5;
    const auto t = oracle::random_t(d, gen);
    const auto nu = oracle::random_decreasing_nu(d, gen);
    const double star = optimal_q(CostProfile(t), VarianceProfile(nu)).r;
    const double grid = grid_search_q(CostProfile(t), VarianceProfile(nu), 25).r;
    CHECK(star <= grid * 1.02);
    CHECK(star <= grid * (1 + 1e-12));
  }
}

TEST_CASE("estimate_c on the sum model") {
  SumModel model = sum_model(4);
  for (std::size_t i : {0u, 2u, 3u}) {
    Stream rng(i + 100);
    const CEstimate c = estimate_c(model, i, 100000, rng);
    const double exact = (4.0 - static_cast<double>(i)) / 4.0;
    CHECK(std::abs(c.estimate - exact) < 3.5 * c.standard_error);
  }
  CHECK_THROWS_AS(
      [&] {
        Stream rng(0);
        estimate_c(model, 4, 10, rng);
      }(),
      InvalidParameter);
}

TEST_CASE("estimate_c at i = 0 estimates var f") {
  FunctionModel model(3, [](const std::vector<double>& u) { return u[0] * u[1] + u[2]; });
  // var(U1 U2 + U3) = 7/144 + 1/12.
  Stream rng(3);
  const CEstimate c = estimate_c(model, 0, 200000, rng);
  CHECK(std::abs(c.estimate - (7.0 / 144 + 1.0 / 12)) < 4 * c.standard_error);
}

TEST_CASE("control-variate and covariance forms agree; control variate is tighter at the tail") {
  SumModel model = sum_model(16);
  int tighter = 0;
  for (int run = 0; run < 20; ++run) {
    Stream a(1000 + run);
    Stream b(2000 + run);
    const CEstimate cv = estimate_c(model, 15, 1000, a);
    const CEstimate cov = estimate_c_covariance(model, 15, 1000, b);
    tighter += cv.standard_error < cov.standard_error;
  }
  CHECK(tighter == 20);
  Stream a(1);
  Stream b(2);
  const CEstimate cv = estimate_c(model, 8, 50000, a);
  const CEstimate cov = estimate_c_covariance(model, 8, 50000, b);
  CHECK(std::abs(cv.estimate - cov.estimate) < 4 * std::hypot(cv.standard_error, cov.standard_error));
  CHECK(std::abs(cov.estimate - 0.5) < 4 * cov.standard_error);
}

TEST_CASE("auto_tune on the sum model") {
  SumModel model = sum_model(8);
  const CostProfile t = CostProfile::linear(8);
  Stream rng(8);
  const TunedPlan plan = auto_tune(model, t, rng, 1000, 1);
  const auto nu = vec(plan.nu_proxy.values());
  for (std::size_t i = 1; i < 8; ++i) CHECK(nu[i] >= nu[i + 1]);
  CHECK(nu[0] >= nu[1] / 2);
  CHECK(nu[8] == 0.0);
  const auto hull = vec(plan.nu_hull.values());
  for (std::size_t i = 0; i < 8; ++i) CHECK(hull[i] >= hull[i + 1]);
  CHECK(plan.c_estimates.size() == 4);
  CHECK(plan.c_estimates.count(7) == 1);
  CHECK(plan.q[0] == 1.0);
  const double log_ratio = std::log(8.0);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(plan.q[i] >= std::min(1.0, plan.expected_cost / ((i + 1.0) * log_ratio)) * (1 - 1e-12));
  }
  CHECK(plan.expected_cost == doctest::Approx(expected_iteration_cost(plan.q, t)));
  CHECK(plan.predicted_r == doctest::Approx(work_variance_product(plan.q, t, plan.nu_hull)));
  CHECK(plan.tuning_cost == doctest::Approx(4 * 1000 * 24.0));
}

TEST_CASE("auto_tune is independent of the thread count") {
  SumModel model = sum_model(32);
  Stream a(4);
  Stream b(4);
  const TunedPlan one = auto_tune(model, CostProfile::linear(32), a, 500, 1);
  const TunedPlan four = auto_tune(model, CostProfile::linear(32), b, 500, 4);
  CHECK(vec(one.q.values()) == vec(four.q.values()));
  CHECK(one.predicted_r == four.predicted_r);
}

TEST_CASE("auto_tune when f depends on the first input only") {
  FunctionModel model(8, [](const std::vector<double>& u) { return u[0]; });
  Stream rng(12);
  const TunedPlan plan = auto_tune(model, CostProfile::linear(8), rng, 1000, 1);
  const auto nu = vec(plan.nu_proxy.values());
  for (std::size_t i = 1; i < 8; ++i) CHECK(nu[i] == 0.0);
  for (std::size_t i = 0; i < 8; ++i) CHECK(plan.q[i] > 0.0);
  CHECK(plan.q[1] == doctest::Approx(1.0 / (2 * std::log(8.0))));
}

TEST_CASE("auto_tune rejects constant models") {
  FunctionModel model(4, [](const std::vector<double>&) { return 3.0; });
  Stream rng(1);
  CHECK_THROWS_AS(auto_tune(model, CostProfile::linear(4), rng, 100, 1), NumericError);
  FunctionModel one(1, [](const std::vector<double>& u) { return u[0]; });
  CHECK_THROWS_AS(auto_tune(one, CostProfile::linear(1), rng, 100, 1), InvalidParameter);
}
