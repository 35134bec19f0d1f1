#include "clusterlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "clusterlab/decimal.hpp"
#include "clusterlab/errors.hpp"
#include "clusterlab/parallel.hpp"

namespace clusterlab {
namespace {

// Norms beyond this would overflow int64 partial sums in dimension 8.
constexpr std::int64_t kMaxNormSq = std::int64_t{1} << 58;

std::int64_t isqrt(std::int64_t v) {
  if (v <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

std::int64_t ceil_sqrt(std::int64_t v) {
  if (v <= 0) return 0;
  const std::int64_t r = isqrt(v);
  return r * r == v ? r : r + 1;
}

// Visits every prefix (k_0..k_{n-2}) whose squared norm leaves room for a last
// coordinate, handing the visitor the admissible |k_{n-1}| range [a, b] so
// that lo <= |k|^2 <= hi. `first` restricts k_0 (used to split work).
template <class Visitor>
void walk(int n, std::int64_t lo, std::int64_t hi, std::int64_t first, Visitor& visit) {
  std::array<std::int32_t, kMaxDimension> prefix{};
  auto rec = [&](auto& self, int depth, std::int64_t partial) -> void {
    const std::int64_t rem_hi = hi - partial;
    if (rem_hi < 0) return;
    if (depth == n - 1) {
      const std::int64_t a = ceil_sqrt(lo - partial);
      const std::int64_t b = isqrt(rem_hi);
      if (a <= b) visit(prefix, partial, a, b);
      return;
    }
    const std::int64_t b = isqrt(rem_hi);
    for (std::int64_t v = -b; v <= b; ++v) {
      prefix[depth] = static_cast<std::int32_t>(v);
      self(self, depth + 1, partial + v * v);
    }
  };
  prefix[0] = static_cast<std::int32_t>(first);
  if (n == 1) return;
  rec(rec, 1, first * first);
}

template <class Visitor>
void walk_all(int n, std::int64_t lo, std::int64_t hi, Visitor& visit) {
  if (hi < 0 || lo > hi) return;
  const std::int64_t b = isqrt(hi);
  for (std::int64_t v = -b; v <= b; ++v) walk(n, lo, hi, v, visit);
}

std::int64_t count_norms(int n, std::int64_t lo, std::int64_t hi) {
  std::int64_t total = 0;
  auto visit = [&](const auto&, std::int64_t, std::int64_t a, std::int64_t b) {
    total += a == 0 ? 2 * b + 1 : 2 * (b - a + 1);
  };
  walk_all(n, lo, hi, visit);
  return total;
}

void check_norm_range(std::int64_t hi) {
  if (hi > kMaxNormSq) {
    throw RangeError("squared radius " + std::to_string(hi) + " exceeds the supported range");
  }
}

}  // namespace

TorusConfig::TorusConfig(int n) : n_(n) {
  if (n < 2 || n > kMaxDimension) {
    throw InvalidConfigError("torus dimension must lie in [2, " + std::to_string(kMaxDimension) +
                             "], got " + std::to_string(n));
  }
}

SpectralBand::SpectralBand(double lambda, double epsilon) : lambda_(lambda), epsilon_(epsilon) {
  if (!std::isfinite(lambda) || lambda < 1.0) {
    throw InvalidConfigError("band requires lambda >= 1");
  }
  if (!std::isfinite(epsilon) || epsilon <= 0.0 || epsilon > 1.0) {
    throw InvalidConfigError("band requires 0 < epsilon <= 1");
  }
  norm_sq_lo_ = exact::ceil_square(lambda);
  norm_sq_hi_ = exact::ceil_square_of_sum(lambda, epsilon);
  check_norm_range(norm_sq_hi_);
}

FrequencyVector make_frequency(std::span<const std::int32_t> k) {
  if (k.size() > static_cast<std::size_t>(kMaxDimension)) {
    throw ShapeError("frequency vector longer than the maximum dimension");
  }
  FrequencyVector f;
  for (std::size_t i = 0; i < k.size(); ++i) {
    f.k[i] = k[i];
    f.norm_sq += std::int64_t{k[i]} * k[i];
  }
  return f;
}

SpectralCluster::SpectralCluster(TorusConfig cfg, SpectralBand band,
                                 std::vector<FrequencyVector> freqs)
    : cfg_(cfg), band_(band), freqs_(std::move(freqs)) {}

std::optional<std::size_t> SpectralCluster::index_of(const FrequencyVector& f) const {
  const auto it = std::lower_bound(freqs_.begin(), freqs_.end(), f);
  if (it == freqs_.end() || !(*it == f)) return std::nullopt;
  return static_cast<std::size_t>(it - freqs_.begin());
}

SpectralCluster enumerate_band(const TorusConfig& cfg, const SpectralBand& band, int jobs) {
  const int n = cfg.dim();
  const std::int64_t lo = band.norm_sq_lo();
  const std::int64_t hi = band.norm_sq_hi() - 1;
  const std::int64_t b0 = isqrt(hi);
  const auto slabs = static_cast<std::size_t>(2 * b0 + 1);

  std::vector<std::vector<FrequencyVector>> parts(slabs);
  parallel_for(slabs, jobs, [&](std::size_t i) {
    auto& out = parts[i];
    auto visit = [&](const std::array<std::int32_t, kMaxDimension>& prefix, std::int64_t partial,
                     std::int64_t a, std::int64_t b) {
      FrequencyVector f;
      f.k = prefix;
      auto emit = [&](std::int64_t v) {
        f.k[n - 1] = static_cast<std::int32_t>(v);
        f.norm_sq = partial + v * v;
        out.push_back(f);
      };
      // ascending order; when a == 0 the first run ends at v = 0
      for (std::int64_t v = -b; v <= -a; ++v) emit(v);
      for (std::int64_t v = std::max<std::int64_t>(a, 1); v <= b; ++v) emit(v);
    };
    walk(n, lo, hi, static_cast<std::int64_t>(i) - b0, visit);
  });

  std::vector<FrequencyVector> freqs;
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  freqs.reserve(total);
  for (auto& p : parts) freqs.insert(freqs.end(), p.begin(), p.end());
  return SpectralCluster(cfg, band, std::move(freqs));
}

std::int64_t count_band(const TorusConfig& cfg, const SpectralBand& band) {
  return count_norms(cfg.dim(), band.norm_sq_lo(), band.norm_sq_hi() - 1);
}

BallCount count_ball(const TorusConfig& cfg, double r) {
  if (!(r >= 0.0)) throw DomainError("count_ball requires r >= 0");
  const std::int64_t hi = exact::floor_square(r);
  check_norm_range(hi);
  BallCount out;
  out.count = count_norms(cfg.dim(), 0, hi);
  out.weyl_remainder =
      static_cast<double>(out.count) - unit_ball_volume(cfg.dim()) * std::pow(r, cfg.dim());
  return out;
}

std::int64_t shell_multiplicity(const TorusConfig& cfg, std::int64_t m) {
  if (m < 0) throw DomainError("shell index must be nonnegative");
  check_norm_range(m);
  return count_norms(cfg.dim(), m, m);
}

std::vector<std::int64_t> shell_histogram(const TorusConfig& cfg, std::int64_t m_lo,
                                          std::int64_t m_hi) {
  if (m_lo < 0 || m_hi < m_lo) throw DomainError("shell_histogram requires 0 <= m_lo <= m_hi");
  check_norm_range(m_hi);
  std::vector<std::int64_t> hist(static_cast<std::size_t>(m_hi - m_lo + 1), 0);
  auto visit = [&](const auto&, std::int64_t partial, std::int64_t a, std::int64_t b) {
    for (std::int64_t v = a; v <= b; ++v) {
      hist[static_cast<std::size_t>(partial + v * v - m_lo)] += v == 0 ? 1 : 2;
    }
  };
  walk_all(cfg.dim(), m_lo, m_hi, visit);
  return hist;
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

SpectralCluster brute_force_band_oracle(const TorusConfig& cfg, const SpectralBand& band,
                                        std::int64_t max_points) {
  const int n = cfg.dim();
  const auto radius = static_cast<std::int64_t>(std::ceil(band.upper()));
  const std::int64_t side = 2 * radius + 1;
  long double points = 1.0L;
  for (int i = 0; i < n; ++i) points *= static_cast<long double>(side);
  if (points > static_cast<long double>(max_points)) {
    throw CapacityError("oracle cube has " + std::to_string(static_cast<double>(points)) +
                        " points, cap is " + std::to_string(max_points));
  }

  // membership per squared norm, decided once by exact comparison
  const std::int64_t max_norm = n * radius * radius;
  std::vector<signed char> member(static_cast<std::size_t>(max_norm + 1), -1);
  auto is_member = [&](std::int64_t m) {
    auto& slot = member[static_cast<std::size_t>(m)];
    if (slot < 0) {
      const bool above = exact::compare_with_square(m, band.lambda()) >= 0;
      const bool below =
          exact::compare_with_square_of_sum(m, band.lambda(), band.epsilon()) < 0;
      slot = above && below ? 1 : 0;
    }
    return slot == 1;
  };

  std::vector<FrequencyVector> out;
  std::array<std::int32_t, kMaxDimension> k{};
  for (int i = 0; i < n; ++i) k[i] = static_cast<std::int32_t>(-radius);
  while (true) {
    std::int64_t m = 0;
    for (int i = 0; i < n; ++i) m += std::int64_t{k[i]} * k[i];
    if (is_member(m)) {
      FrequencyVector f;
      f.k = k;
      f.norm_sq = m;
      out.push_back(f);
    }
    int d = n - 1;
    while (d >= 0 && k[d] == radius) {
      k[d] = static_cast<std::int32_t>(-radius);
      --d;
    }
    if (d < 0) break;
    ++k[d];
  }
  return SpectralCluster(cfg, band, std::move(out));
}

}  // namespace clusterlab
