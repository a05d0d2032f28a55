#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "freshfunnel/bandit.hpp"
#include "freshfunnel/rng.hpp"

using namespace freshfunnel;
using namespace freshfunnel::bandit;

namespace {

std::vector<std::pair<long long, long long>> synthetic_obs(
    double a, double b, int items, long long n_per_item, std::uint64_t seed) {
  std::vector<std::pair<long long, long long>> obs;
  auto g = rng::engine(seed);
  for (int i = 0; i < items; ++i) {
    const double rate = rng::beta_draw(g, a, b);
    std::binomial_distribution<long long> bin(n_per_item, rate);
    obs.emplace_back(bin(g), n_per_item);
  }
  return obs;
}

}  // namespace

TEST_CASE("prior fit recovers Beta(2,8) within 20 percent") {
  const auto obs = synthetic_obs(2.0, 8.0, 1000, 1000, 7101);
  const GlobalPrior p = fit_prior(obs);
  CHECK(!p.clamped);
  CHECK(p.alpha0 == doctest::Approx(2.0).epsilon(0.20));
  CHECK(p.beta0 == doctest::Approx(8.0).epsilon(0.20));
}

TEST_CASE("prior fit on symmetric data has mean one half") {
  std::vector<std::pair<long long, long long>> obs = {{50, 100}, {50, 100}};
  const GlobalPrior p = fit_prior(obs);
  const double mean = p.alpha0 / (p.alpha0 + p.beta0);
  CHECK(mean == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("newton fit agrees with a 200x200 grid search") {
  const auto obs = synthetic_obs(3.0, 12.0, 10, 500, 4242);
  const GlobalPrior p = fit_prior(obs);

  const int cells = 200;
  const double lo = 0.1, hi = 50.0;
  const double step = (hi - lo) / (cells - 1);
  double best_ll = -1e300, best_a = lo, best_b = lo;
  for (int i = 0; i < cells; ++i) {
    for (int j = 0; j < cells; ++j) {
      const double a = lo + i * step;
      const double b = lo + j * step;
      const double ll = beta_binomial_loglik(a, b, obs);
      if (ll > best_ll) {
        best_ll = ll;
        best_a = a;
        best_b = b;
      }
    }
  }
  CHECK(std::abs(p.alpha0 - best_a) <= step + 1e-9);
  CHECK(std::abs(p.beta0 - best_b) <= step + 1e-9);
}

TEST_CASE("degenerate all-zero data clamps with a warning flag") {
  std::vector<std::pair<long long, long long>> obs = {{0, 200}, {0, 150},
                                                      {0, 300}};
  const GlobalPrior p = fit_prior(obs);
  CHECK(p.clamped);
  CHECK(p.alpha0 >= 1e-3);
  CHECK(p.beta0 <= 1e6);
}

TEST_CASE("prior fit input validation") {
  std::vector<std::pair<long long, long long>> one = {{5, 10}};
  CHECK_THROWS_AS(fit_prior(one), std::invalid_argument);
  std::vector<std::pair<long long, long long>> bad = {{11, 10}, {1, 10}};
  CHECK_THROWS_AS(fit_prior(bad), std::invalid_argument);
}

TEST_CASE("sampled rewards match analytic Beta posterior moments") {
  struct Case {
    GlobalPrior prior;
    ArmStats arm;
  };
  const Case cases[] = {
      {{1.0, 1.0, false}, {1, 0, 0}},
      {{1.0, 1.0, false}, {2, 30, 100}},
      {{2.0, 8.0, false}, {3, 0, 0}},
  };
  const int draws = 100000;
  for (const auto& c : cases) {
    const double a = c.prior.alpha0 + c.arm.x;
    const double b = c.prior.beta0 + (c.arm.n - c.arm.x);
    const double mean = a / (a + b);
    const double var = a * b / ((a + b) * (a + b) * (a + b + 1.0));
    auto g = rng::engine(99, c.arm.item_id);
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double r = sample_reward(c.prior, c.arm, g);
      CHECK(r > 0.0);
      CHECK(r < 1.0);
      s += r;
      s2 += r * r;
    }
    const double emp_mean = s / draws;
    const double emp_var = s2 / draws - emp_mean * emp_mean;
    const double se_mean = std::sqrt(var / draws);
    CHECK(std::abs(emp_mean - mean) < 3.0 * se_mean);
    // Loose bound for the variance: 10 percent relative.
    CHECK(emp_var == doctest::Approx(var).epsilon(0.10));
  }
}

TEST_CASE("uniform posterior draws have mean near one half") {
  GlobalPrior p{1.0, 1.0, false};
  ArmStats arm{7, 0, 0};
  auto g = rng::engine(12345);
  double s = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) s += sample_reward(p, arm, g);
  const double mean = s / draws;
  CHECK(mean > 0.497);
  CHECK(mean < 0.503);
}

TEST_CASE("select_top returns the single candidate") {
  GlobalPrior p{1.0, 1.0, false};
  std::vector<ArmStats> cands = {{42, 3, 9}};
  RewardStreams streams(1, 0, 0);
  const auto sel = select_top(p, cands, 10, streams);
  REQUIRE(sel.size() == 1);
  CHECK(sel[0] == 42);
}

TEST_CASE("posterior separation picks the strong arm almost always") {
  GlobalPrior p{1.0, 1.0, false};
  std::vector<ArmStats> cands = {{1, 999, 1000}, {2, 1, 1000}};
  int wins_a = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    RewardStreams streams(555, t, 0);
    const auto sel = select_top(p, cands, 1, streams);
    if (sel[0] == 1) ++wins_a;
  }
  CHECK(static_cast<double>(wins_a) / trials > 0.99);
}

TEST_CASE("selection is exchangeable under candidate permutation") {
  GlobalPrior p{1.5, 6.0, false};
  std::vector<ArmStats> cands;
  for (int i = 0; i < 30; ++i)
    cands.push_back({static_cast<ItemId>(100 + i), i % 7, 10 + i});
  RewardStreams streams(31337, 12, 99);
  const auto base = select_top(p, cands, 10, streams);

  auto g = rng::engine(1);
  for (int rep = 0; rep < 20; ++rep) {
    std::shuffle(cands.begin(), cands.end(), g);
    const auto sel = select_top(p, cands, 10, streams);
    CHECK(std::set<ItemId>(sel.begin(), sel.end()) ==
          std::set<ItemId>(base.begin(), base.end()));
  }
}

TEST_CASE("closed-loop bandit concentrates on the best arm") {
  const double true_ctr[3] = {0.1, 0.2, 0.3};
  std::vector<ArmStats> arms = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  GlobalPrior p{1.0, 1.0, false};
  auto reward_rng = rng::engine(2024);
  long long pulls[3] = {0, 0, 0};
  double regret_first = 0.0, regret_last = 0.0;
  const int total = 10000;
  for (int t = 0; t < total; ++t) {
    RewardStreams streams(808, t, 0);
    const auto sel = select_top(p, arms, 1, streams);
    const int a = static_cast<int>(sel[0]);
    ++pulls[a];
    const bool good = rng::uniform(reward_rng) < true_ctr[a];
    update_arm(arms[static_cast<std::size_t>(a)], true, good);
    const double r = 0.3 - true_ctr[a];
    if (t < total / 2)
      regret_first += r;
    else
      regret_last += r;
  }
  CHECK(static_cast<double>(pulls[2]) / total > 0.60);
  CHECK(regret_last < regret_first);
}

TEST_CASE("arm updates match an event recount") {
  ArmStats arm{5, 0, 0};
  update_arm(arm, true, false);
  CHECK(arm.x == 0);
  CHECK(arm.n == 1);
  arm = {5, 5, 10};
  update_arm(arm, true, true);
  CHECK(arm.x == 6);
  CHECK(arm.n == 11);

  CHECK_THROWS_AS(update_arm(arm, false, true), std::invalid_argument);

  arm = {9, 0, 0};
  long long count_n = 0, count_x = 0;
  auto g = rng::engine(77);
  for (int i = 0; i < 1000; ++i) {
    const bool imp = rng::uniform(g) < 0.8;
    const bool good = imp && rng::uniform(g) < 0.3;
    update_arm(arm, imp, good);
    if (imp) ++count_n;
    if (good) ++count_x;
    CHECK(arm.x <= arm.n);
  }
  CHECK(arm.n == count_n);
  CHECK(arm.x == count_x);
}
