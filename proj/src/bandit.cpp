#include "freshfunnel/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace freshfunnel::bandit {

namespace {

// Digamma via upward recurrence into the asymptotic range.
double digamma(double x) {
  double r = 0.0;
  while (x < 6.0) {
    r -= 1.0 / x;
    x += 1.0;
  }
  const double f = 1.0 / (x * x);
  return r + std::log(x) - 0.5 / x -
         f * (1.0 / 12.0 - f * (1.0 / 120.0 - f / 252.0));
}

double trigamma(double x) {
  double r = 0.0;
  while (x < 6.0) {
    r += 1.0 / (x * x);
    x += 1.0;
  }
  const double f = 1.0 / (x * x);
  return r + 1.0 / x + 0.5 * f +
         f / x * (1.0 / 6.0 - f * (1.0 / 30.0 - f / 42.0));
}

struct Deriv {
  double ll;
  double ga, gb;            // gradient wrt (alpha, beta)
  double haa, hab, hbb;     // Hessian wrt (alpha, beta)
};

Deriv derivatives(double a, double b,
                  std::span<const std::pair<long long, long long>> obs) {
  Deriv d{0, 0, 0, 0, 0, 0};
  const double m = static_cast<double>(obs.size());
  d.ll = m * (std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b));
  d.ga = m * (digamma(a + b) - digamma(a));
  d.gb = m * (digamma(a + b) - digamma(b));
  const double t_ab = trigamma(a + b);
  d.haa = m * (t_ab - trigamma(a));
  d.hbb = m * (t_ab - trigamma(b));
  d.hab = m * t_ab;
  for (const auto& [x, n] : obs) {
    const double xd = static_cast<double>(x);
    const double nd = static_cast<double>(n);
    d.ll += std::lgamma(a + xd) + std::lgamma(b + nd - xd) -
            std::lgamma(a + b + nd);
    d.ga += digamma(a + xd) - digamma(a + b + nd);
    d.gb += digamma(b + nd - xd) - digamma(a + b + nd);
    const double t_abn = trigamma(a + b + nd);
    d.haa += trigamma(a + xd) - t_abn;
    d.hbb += trigamma(b + nd - xd) - t_abn;
    d.hab += -t_abn;
  }
  return d;
}

std::pair<double, double> moments_init(
    std::span<const std::pair<long long, long long>> obs) {
  double mean = 0.0;
  for (const auto& [x, n] : obs) mean += static_cast<double>(x) / n;
  mean /= static_cast<double>(obs.size());
  double var = 0.0;
  for (const auto& [x, n] : obs) {
    const double p = static_cast<double>(x) / n;
    var += (p - mean) * (p - mean);
  }
  var /= static_cast<double>(obs.size());
  mean = std::clamp(mean, 1e-6, 1.0 - 1e-6);
  double s = 10.0;
  if (var > 1e-12) s = std::max(0.01, mean * (1.0 - mean) / var - 1.0);
  return {mean * s, (1.0 - mean) * s};
}

}  // namespace

double beta_binomial_loglik(
    double alpha, double beta,
    std::span<const std::pair<long long, long long>> obs) {
  double ll = static_cast<double>(obs.size()) *
              (std::lgamma(alpha + beta) - std::lgamma(alpha) -
               std::lgamma(beta));
  for (const auto& [x, n] : obs) {
    const double xd = static_cast<double>(x);
    const double nd = static_cast<double>(n);
    ll += std::lgamma(alpha + xd) + std::lgamma(beta + nd - xd) -
          std::lgamma(alpha + beta + nd);
  }
  return ll;
}

GlobalPrior fit_prior(std::span<const std::pair<long long, long long>> obs,
                      const PriorFitOptions& opt) {
  if (obs.size() < 2)
    throw std::invalid_argument("fit_prior: need at least 2 observations");
  for (const auto& [x, n] : obs)
    if (x < 0 || n <= 0 || x > n)
      throw std::invalid_argument("fit_prior: invalid (x, n) observation");

  const double lo = std::log(opt.bound_lo);
  const double hi = std::log(opt.bound_hi);
  auto [a0, b0] = moments_init(obs);
  double la = std::clamp(std::log(a0), lo, hi);
  double lb = std::clamp(std::log(b0), lo, hi);

  double ll = beta_binomial_loglik(std::exp(la), std::exp(lb), obs);
  for (int it = 0; it < opt.max_iters; ++it) {
    const double a = std::exp(la);
    const double b = std::exp(lb);
    const Deriv d = derivatives(a, b, obs);
    // Chain rule to (log alpha, log beta) space.
    const double g0 = d.ga * a;
    const double g1 = d.gb * b;
    if (std::max(std::abs(g0), std::abs(g1)) < opt.grad_tol) break;
    const double h00 = d.haa * a * a + d.ga * a;
    const double h11 = d.hbb * b * b + d.gb * b;
    const double h01 = d.hab * a * b;

    double s0, s1;
    const double det = h00 * h11 - h01 * h01;
    if (h00 < 0.0 && det > 0.0) {
      // Newton step for a locally concave objective.
      s0 = -(h11 * g0 - h01 * g1) / det;
      s1 = -(h00 * g1 - h01 * g0) / det;
    } else {
      s0 = g0;  // gradient ascent fallback
      s1 = g1;
    }
    const double norm = std::max(std::abs(s0), std::abs(s1));
    if (norm > 5.0) {  // trust region in log space
      s0 *= 5.0 / norm;
      s1 *= 5.0 / norm;
    }
    double step = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt, step *= 0.5) {
      const double na = std::clamp(la + step * s0, lo, hi);
      const double nb = std::clamp(lb + step * s1, lo, hi);
      const double nll = beta_binomial_loglik(std::exp(na), std::exp(nb), obs);
      if (nll > ll) {
        la = na;
        lb = nb;
        ll = nll;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }

  GlobalPrior prior;
  prior.alpha0 = std::exp(la);
  prior.beta0 = std::exp(lb);
  prior.clamped = (la <= lo + 1e-12 || la >= hi - 1e-12 || lb <= lo + 1e-12 ||
                   lb >= hi - 1e-12);
  return prior;
}

double sample_reward(const GlobalPrior& prior, const ArmStats& arm,
                     std::mt19937_64& g) {
  return rng::beta_draw(g, prior.alpha0 + static_cast<double>(arm.x),
                        prior.beta0 + static_cast<double>(arm.n - arm.x));
}

std::vector<ItemId> select_top(const GlobalPrior& prior,
                               std::span<const ArmStats> candidates, int m,
                               const RewardStreams& streams) {
  if (m < 1) throw std::invalid_argument("select_top: m must be >= 1");
  std::vector<std::pair<double, ItemId>> scored;
  scored.reserve(candidates.size());
  for (const auto& arm : candidates) {
    auto g = streams.engine_for(arm.item_id);
    scored.emplace_back(sample_reward(prior, arm, g), arm.item_id);
  }
  const std::size_t take = std::min<std::size_t>(scored.size(),
                                                 static_cast<std::size_t>(m));
  std::partial_sort(scored.begin(), scored.begin() + take, scored.end(),
                    [](const auto& l, const auto& r) {
                      if (l.first != r.first) return l.first > r.first;
                      return l.second < r.second;
                    });
  std::vector<ItemId> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(scored[i].second);
  return out;
}

void update_arm(ArmStats& arm, bool impressed, bool good_click) {
  if (good_click && !impressed)
    throw std::invalid_argument("update_arm: good click requires impression");
  if (impressed) ++arm.n;
  if (good_click) ++arm.x;
}

}  // namespace freshfunnel::bandit
