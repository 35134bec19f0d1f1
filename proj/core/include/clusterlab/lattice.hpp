#pragma once

// Integer frequency vectors of the flat torus R^n / (2 pi Z)^n.
//
// The eigenfunctions are (2 pi)^{-n/2} exp(i k.x), k in Z^n, and sqrt(-Delta)
// acts on them by |k|. A spectral band [lambda, lambda + epsilon) therefore
// corresponds to the integer vectors in a thin annulus, and every count in
// this module is an exact lattice-point count.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace clusterlab {

inline constexpr int kMaxDimension = 8;

class TorusConfig {
 public:
  /// Throws InvalidConfigError unless 2 <= n <= kMaxDimension.
  explicit TorusConfig(int n);

  int dim() const noexcept { return n_; }

  friend bool operator==(const TorusConfig&, const TorusConfig&) = default;

 private:
  int n_;
};

/// Half-open band [lambda, lambda + epsilon) in sqrt(-Delta) units.
///
/// Construction requires lambda >= 1 and 0 < epsilon <= 1. The shrinking-band
/// regime 1/lambda < epsilon is not enforced here (exact enumeration is
/// meaningful without it); operations that rely on it check
/// `in_shrinking_regime()` themselves.
class SpectralBand {
 public:
  SpectralBand(double lambda, double epsilon);

  double lambda() const noexcept { return lambda_; }
  double epsilon() const noexcept { return epsilon_; }
  double upper() const noexcept { return lambda_ + epsilon_; }

  /// Exact integer bounds: |k| in the band  <=>  norm_sq_lo <= |k|^2 < norm_sq_hi.
  std::int64_t norm_sq_lo() const noexcept { return norm_sq_lo_; }
  std::int64_t norm_sq_hi() const noexcept { return norm_sq_hi_; }

  bool in_shrinking_regime() const noexcept { return epsilon_ * lambda_ > 1.0; }

 private:
  double lambda_;
  double epsilon_;
  std::int64_t norm_sq_lo_;
  std::int64_t norm_sq_hi_;
};

struct FrequencyVector {
  std::array<std::int32_t, kMaxDimension> k{};  // unused trailing entries are zero
  std::int64_t norm_sq = 0;

  friend auto operator<=>(const FrequencyVector& a, const FrequencyVector& b) {
    return a.k <=> b.k;
  }
  friend bool operator==(const FrequencyVector& a, const FrequencyVector& b) {
    return a.k == b.k;
  }
};

FrequencyVector make_frequency(std::span<const std::int32_t> k);

class SpectralCluster {
 public:
  /// `freqs` must be sorted lexicographically and duplicate free.
  SpectralCluster(TorusConfig cfg, SpectralBand band, std::vector<FrequencyVector> freqs);

  const TorusConfig& config() const noexcept { return cfg_; }
  const SpectralBand& band() const noexcept { return band_; }
  std::span<const FrequencyVector> freqs() const noexcept { return freqs_; }
  std::size_t size() const noexcept { return freqs_.size(); }
  bool empty() const noexcept { return freqs_.empty(); }
  const FrequencyVector& operator[](std::size_t i) const { return freqs_[i]; }

  std::optional<std::size_t> index_of(const FrequencyVector& f) const;

  friend bool operator==(const SpectralCluster& a, const SpectralCluster& b) {
    return a.cfg_ == b.cfg_ && a.freqs_ == b.freqs_;
  }

 private:
  TorusConfig cfg_;
  SpectralBand band_;
  std::vector<FrequencyVector> freqs_;
};

/// All k in Z^n with |k| in the band, in lexicographic order.
///
/// Coordinates are fixed one at a time; each loop bound comes from the
/// remaining squared-norm budget and the last coordinate is solved directly,
/// so work is proportional to the (n-1)-dimensional shadow of the annulus
/// rather than to the enclosing cube. `jobs > 1` splits the leading
/// coordinate across threads; the output order does not depend on `jobs`.
SpectralCluster enumerate_band(const TorusConfig& cfg, const SpectralBand& band, int jobs = 1);

/// Number of k with |k|^2 in [norm_sq_lo, norm_sq_hi), without materialising them.
std::int64_t count_band(const TorusConfig& cfg, const SpectralBand& band);

struct BallCount {
  std::int64_t count = 0;
  double weyl_remainder = 0.0;  // count - omega_n r^n
};

/// #{k : |k| <= r}, with the Weyl remainder against the unit-ball volume.
BallCount count_ball(const TorusConfig& cfg, double r);

/// #{k : |k|^2 = m}.
std::int64_t shell_multiplicity(const TorusConfig& cfg, std::int64_t m);

/// Shell multiplicities for every m in [m_lo, m_hi]; entry i is for m_lo + i.
std::vector<std::int64_t> shell_histogram(const TorusConfig& cfg, std::int64_t m_lo,
                                          std::int64_t m_hi);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

/// Surface area of the unit sphere S^{n-1} in R^n.
double unit_sphere_area(int n);

inline constexpr std::int64_t kDefaultOracleCap = 50'000'000;

/// Reference implementation: scans the full cube [-R, R]^n, R = ceil(lambda +
/// epsilon), and decides membership by exact rational comparison per norm.
/// Throws CapacityError if (2R + 1)^n exceeds `max_points`.
SpectralCluster brute_force_band_oracle(const TorusConfig& cfg, const SpectralBand& band,
                                        std::int64_t max_points = kDefaultOracleCap);

}  // namespace clusterlab
