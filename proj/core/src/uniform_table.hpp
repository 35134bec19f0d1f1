#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace clusterlab::detail {

// Samples v[i] = f(x0 + i h) read back by 8-point Lagrange interpolation.
// Callers pad the ends (by symmetry or zeros) so interior stencils stay centred.
class UniformTable {
 public:
  UniformTable() = default;
  UniformTable(double x0, double h, std::vector<double> v) : x0_(x0), h_(h), v_(std::move(v)) {}

  double front() const { return x0_; }
  double back() const { return x0_ + h_ * static_cast<double>(v_.size() - 1); }
  double step() const { return h_; }
  std::size_t size() const { return v_.size(); }
  const std::vector<double>& values() const { return v_; }

  double operator()(double x) const {
    constexpr int kPts = 8;
    const double s = (x - x0_) / h_;
    auto base = static_cast<std::ptrdiff_t>(std::floor(s)) - (kPts / 2 - 1);
    base = std::clamp<std::ptrdiff_t>(base, 0, static_cast<std::ptrdiff_t>(v_.size()) - kPts);
    const double u = s - static_cast<double>(base);
    const auto iu = static_cast<std::ptrdiff_t>(u);
    if (static_cast<double>(iu) == u && iu >= 0 && iu < kPts) return v_[static_cast<std::size_t>(base + iu)];

    // barycentric form on equispaced nodes: w_j = (-1)^j C(7, j)
    static constexpr std::array<double, kPts> w{1, -7, 21, -35, 35, -21, 7, -1};
    double num = 0.0;
    double den = 0.0;
    for (int j = 0; j < kPts; ++j) {
      const double t = w[static_cast<std::size_t>(j)] / (u - j);
      num += t * v_[static_cast<std::size_t>(base + j)];
      den += t;
    }
    return num / den;
  }

 private:
  double x0_ = 0.0;
  double h_ = 1.0;
  std::vector<double> v_;
};

}  // namespace clusterlab::detail
