#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "freshfunnel/rng.hpp"
#include "freshfunnel/types.hpp"

namespace freshfunnel::bandit {

// Per-content sufficient statistics, scoped to dedicated-slot traffic:
// n = impressions, x = good clicks (click with dwell >= 10 s).
struct ArmStats {
  ItemId item_id = 0;
  long long x = 0;
  long long n = 0;
};

struct GlobalPrior {
  double alpha0 = 1.0;
  double beta0 = 1.0;
  bool clamped = false;  // set when the MLE hit the parameter bounds
};

struct PriorFitOptions {
  double bound_lo = 1e-3;
  double bound_hi = 1e6;
  double grad_tol = 1e-8;
  int max_iters = 100;
};

// Beta-Binomial marginal log-likelihood of (alpha, beta) over (x, n) pairs.
double beta_binomial_loglik(double alpha, double beta,
                            std::span<const std::pair<long long, long long>> obs);

// Maximum-likelihood fit of the global prior, Newton iterations on
// (log alpha, log beta) from a method-of-moments start. Observations are
// expected to have n >= 100 (the caller filters); at least 2 required.
GlobalPrior fit_prior(std::span<const std::pair<long long, long long>> obs,
                      const PriorFitOptions& opt = {});

// One Thompson draw: r ~ Beta(alpha0 + x, beta0 + n - x).
double sample_reward(const GlobalPrior& prior, const ArmStats& arm,
                     std::mt19937_64& g);

// Derives one rng engine per candidate so that reward draws are a function of
// (seed, tick, request, item) alone: candidate order cannot change the draws,
// and selections replay exactly.
class RewardStreams {
 public:
  RewardStreams(std::uint64_t seed, Tick tick, std::uint64_t request_key)
      : seed_(seed), tick_(tick), request_key_(request_key) {}

  std::mt19937_64 engine_for(ItemId item) const {
    return rng::engine(seed_, static_cast<std::uint64_t>(tick_), request_key_,
                       item);
  }

 private:
  std::uint64_t seed_;
  Tick tick_;
  std::uint64_t request_key_;
};

// Thompson-sampling selection: one sampled reward per candidate, top-m by
// reward (descending, ties to the smaller item id).
std::vector<ItemId> select_top(const GlobalPrior& prior,
                               std::span<const ArmStats> candidates, int m,
                               const RewardStreams& streams);

// Zero-lag counter update; rejects good_click without impression.
void update_arm(ArmStats& arm, bool impressed, bool good_click);

}  // namespace freshfunnel::bandit
