#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace freshfunnel::rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// FNV-1a over a tag string, for naming rng purposes ("uploads", "bandit", ...).
constexpr std::uint64_t tag(const char* s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (; *s; ++s) h = (h ^ static_cast<std::uint64_t>(*s)) * 1099511628211ULL;
  return h;
}

constexpr std::uint64_t mix(std::uint64_t a) { return splitmix64(a); }

template <class... Rest>
constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b, Rest... rest) {
  return mix(splitmix64(a) ^ (b + 0x9E3779B97F4A7C15ULL), rest...);
}

template <class... Keys>
std::mt19937_64 engine(Keys... keys) {
  return std::mt19937_64(mix(static_cast<std::uint64_t>(keys)...));
}

inline double uniform(std::mt19937_64& g) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(g);
}

inline double gamma_draw(std::mt19937_64& g, double shape) {
  return std::gamma_distribution<double>(shape, 1.0)(g);
}

inline double beta_draw(std::mt19937_64& g, double a, double b) {
  double x = gamma_draw(g, a);
  double y = gamma_draw(g, b);
  return (x + y > 0.0) ? x / (x + y) : 0.5;
}

inline std::vector<double> dirichlet(std::mt19937_64& g, int n, double alpha) {
  std::vector<double> v(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (auto& x : v) {
    x = gamma_draw(g, alpha);
    sum += x;
  }
  if (sum <= 0.0) {
    for (auto& x : v) x = 1.0 / n;
  } else {
    for (auto& x : v) x /= sum;
  }
  return v;
}

// Zipf over {0, ..., n-1}: P(k) proportional to 1/(k+1)^s. Sampled by binary
// search on the precomputed cdf.
class ZipfSampler {
 public:
  ZipfSampler(int n, double s) : cdf_(static_cast<std::size_t>(n)) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      acc += 1.0 / std::pow(static_cast<double>(k + 1), s);
      cdf_[static_cast<std::size_t>(k)] = acc;
    }
    for (auto& c : cdf_) c /= acc;
  }

  int operator()(std::mt19937_64& g) const {
    double u = uniform(g);
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<int>(it - cdf_.begin());
  }

  int size() const { return static_cast<int>(cdf_.size()); }

 private:
  std::vector<double> cdf_;
};

}  // namespace freshfunnel::rng
