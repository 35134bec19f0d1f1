#include "clusterlab/mollifier.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "clusterlab/errors.hpp"
#include "clusterlab/fourier_grid.hpp"
#include "clusterlab/quadrature.hpp"
#include "uniform_table.hpp"

namespace clusterlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPad = 4;

double default_bump(double t, double steepness) {
  const double u = 2.0 * t;
  if (!(std::abs(u) < 1.0)) return 0.0;
  return std::exp(-steepness / (1.0 - u * u));
}

double parse_number(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InvalidConfigError("cannot parse " + key + " = '" + text + "'");
  }
}

}  // namespace

std::map<std::string, std::string> MollifierProfile::to_config() const {
  auto fmt = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  return {{"mollifier.steepness", fmt(steepness)},
          {"mollifier.gamma_panels", std::to_string(gamma_panels)},
          {"mollifier.table_step", fmt(table_step)},
          {"mollifier.table_max", fmt(table_max)},
          {"mollifier.conv_points", std::to_string(conv_points)}};
}

MollifierProfile MollifierProfile::from_config(const std::map<std::string, std::string>& kv) {
  MollifierProfile p;
  for (const auto& [key, value] : kv) {
    if (key.rfind("mollifier.", 0) != 0) continue;
    if (key == "mollifier.steepness") {
      p.steepness = parse_number(key, value);
    } else if (key == "mollifier.gamma_panels") {
      p.gamma_panels = static_cast<int>(parse_number(key, value));
    } else if (key == "mollifier.table_step") {
      p.table_step = parse_number(key, value);
    } else if (key == "mollifier.table_max") {
      p.table_max = parse_number(key, value);
    } else if (key == "mollifier.conv_points") {
      p.conv_points = static_cast<int>(parse_number(key, value));
    } else {
      throw InvalidConfigError("unknown mollifier key '" + key + "'");
    }
  }
  if (!(p.steepness > 0.0) || p.gamma_panels < 4 || !(p.table_step > 0.0) ||
      !(p.table_max >= 10.0) || p.conv_points < 64) {
    throw InvalidConfigError("mollifier profile out of range");
  }
  return p;
}

struct Mollifier::Impl {
  MollifierProfile profile;
  std::function<double(double)> gamma;
  std::vector<double> nodes;  // Gauss-Legendre nodes on [0, 1/2]
  std::vector<double> weighted_gamma;
  double gamma_hat0 = 0.0;
  detail::UniformTable a_table;
  detail::UniformTable conv_table;

  double gamma_hat(double tau) const {
    const double phase_per_panel = std::abs(tau) * 0.5 / profile.gamma_panels;
    if (phase_per_panel > 3.0) {
      const int panels = static_cast<int>(std::ceil(std::abs(tau) * 0.5 / 3.0));
      return 2.0 * integrate_panels([&](double t) { return gamma(t) * std::cos(tau * t); }, 0.0,
                                    0.5, panels);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weighted_gamma[i] * std::cos(tau * nodes[i]);
    return 2.0 * s;
  }

  double conv_direct(double t) const {
    t = std::abs(t);
    if (t >= 1.0) return 0.0;
    // supports overlap on [t - 1/2, 1/2]
    return integrate_panels([&](double s) { return gamma(s) * gamma(t - s); }, t - 0.5, 0.5, 24);
  }
};

Mollifier build_mollifier(const MollifierProfile& profile, std::function<double(double)> gamma) {
  auto impl = std::make_shared<Mollifier::Impl>();
  impl->profile = profile;
  if (gamma) {
    impl->gamma = std::move(gamma);
  } else {
    const double s = profile.steepness;
    impl->gamma = [s](double t) { return default_bump(t, s); };
  }
  const auto& g = impl->gamma;

  for (int i = 0; i <= 256; ++i) {
    const double t = 0.5 * i / 256.0;
    const double lhs = g(t);
    const double rhs = g(-t);
    if (!std::isfinite(lhs) || !std::isfinite(rhs)) throw ValidationError("bump is not finite");
    if (lhs < 0.0 || rhs < 0.0) {
      throw ValidationError("bump changes sign near t = " + std::to_string(t));
    }
    if (std::abs(lhs - rhs) > 1e-14 * std::max(1.0, std::abs(lhs))) {
      throw ValidationError("bump is not even at t = " + std::to_string(t));
    }
  }
  for (double t : {0.5, 0.55, 0.75, 1.0}) {
    if (g(t) != 0.0 || g(-t) != 0.0) {
      throw ValidationError("bump must vanish outside (-1/2, 1/2)");
    }
  }

  using Rule = boost::math::quadrature::gauss<double, 20>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const int panels = profile.gamma_panels;
  const double width = 0.5 / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * width;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double sgn : {-1.0, 1.0}) {
        if (x[i] == 0.0 && sgn < 0.0) continue;
        const double t = mid + sgn * 0.5 * width * x[i];
        impl->nodes.push_back(t);
        impl->weighted_gamma.push_back(0.5 * width * w[i] * g(t));
      }
    }
  }
  impl->gamma_hat0 = impl->gamma_hat(0.0);
  if (!(impl->gamma_hat0 > 0.0)) throw ValidationError("bump is identically zero");

  {
    const double h = profile.table_step;
    const auto count = static_cast<std::ptrdiff_t>(std::ceil(profile.table_max / h));
    std::vector<double> v(static_cast<std::size_t>(count + 2 * kPad + 1));
    for (std::ptrdiff_t j = 0; j <= count + kPad; ++j) {
      const double r = impl->gamma_hat(j * h) / impl->gamma_hat0;
      v[static_cast<std::size_t>(j + kPad)] = r * r;
    }
    for (std::ptrdiff_t j = 1; j <= kPad; ++j) {
      v[static_cast<std::size_t>(kPad - j)] = v[static_cast<std::size_t>(kPad + j)];
    }
    impl->a_table = detail::UniformTable(-kPad * h, h, std::move(v));
  }
  {
    const int m = profile.conv_points;
    const double h = 1.0 / m;
    std::vector<double> v(static_cast<std::size_t>(m + 2 * kPad + 1), 0.0);
    for (int j = 0; j <= m; ++j) v[static_cast<std::size_t>(j + kPad)] = impl->conv_direct(j * h);
    for (int j = 1; j <= kPad; ++j) {
      v[static_cast<std::size_t>(kPad - j)] = v[static_cast<std::size_t>(kPad + j)];
    }
    impl->conv_table = detail::UniformTable(-kPad * h, h, std::move(v));
  }
  return Mollifier(std::move(impl));
}

const Mollifier& default_mollifier() {
  static const Mollifier m = build_mollifier();
  return m;
}

double Mollifier::a(double tau) const {
  tau = std::abs(tau);
  if (tau <= impl_->profile.table_max) return impl_->a_table(tau);
  return a_direct(tau);
}

double Mollifier::a_direct(double tau) const {
  const double r = impl_->gamma_hat(tau) / impl_->gamma_hat0;
  return r * r;
}

double Mollifier::a_hat(double t) const {
  t = std::abs(t);
  if (t >= 1.0) return 0.0;
  const double g0 = impl_->gamma_hat0;
  return 2.0 * kPi * std::max(0.0, impl_->conv_table(t)) / (g0 * g0);
}

double Mollifier::a_hat_direct(double t) const {
  const double g0 = impl_->gamma_hat0;
  return 2.0 * kPi * impl_->conv_direct(t) / (g0 * g0);
}

double Mollifier::gamma(double t) const { return impl_->gamma(t); }

const MollifierProfile& Mollifier::profile() const { return impl_->profile; }

double Mollifier::decay_radius(double threshold) const {
  const auto& v = impl_->a_table.values();
  const double h = impl_->a_table.step();
  for (std::size_t j = v.size(); j-- > static_cast<std::size_t>(kPad);) {
    if (v[j] >= threshold) {
      return std::min(impl_->profile.table_max, static_cast<double>(j + 1 - kPad) * h);
    }
  }
  return 0.0;
}

IdentityCheck frequency_identity_check(const Mollifier& m, double mu, double lambda, double eps) {
  if (!(eps > 0.0) || !(lambda >= 0.0) || !(mu >= 0.0)) {
    throw DomainError("identity check needs mu >= 0, lambda >= 0, eps > 0");
  }
  IdentityCheck out;
  const double wl = lambda / eps;
  const double wm = mu / eps;
  // one panel per half period of the fastest oscillation, plus a floor
  out.panels = 16 + static_cast<int>(std::ceil((wl + wm) / kPi));
  auto f = [&](double s) { return m.a_hat(s) * std::cos(s * wl) * std::cos(s * wm); };
  try {
    const auto r = integrate_checked(f, 0.0, 1.0, out.panels, 1e-11);
    out.lhs = 2.0 / kPi * r.value;
    out.quadrature_error = 2.0 / kPi * r.error;
  } catch (const NumericError& e) {
    std::ostringstream msg;
    msg << e.what() << " (panels " << out.panels << " x 20 nodes, mu " << mu << ", lambda "
        << lambda << ", eps " << eps << ")";
    throw NumericError(msg.str());
  }
  out.rhs = m.a((mu - lambda) / eps) + m.a((-mu - lambda) / eps);
  out.discrepancy = std::abs(out.lhs - out.rhs);
  return out;
}

double half_level_delta(const Mollifier& m) {
  constexpr double h = 1e-4;
  std::size_t j = 0;
  while (m.b(static_cast<double>(j) * h) >= 0.5 + 2.0 * h) ++j;
  return static_cast<double>(j) * h;
}

double CutoffSpec::operator()(double t) const {
  const double u = std::abs(t) / scale;
  if (u <= 1.0) return 1.0;
  if (u >= 2.0) return 0.0;
  const double p = std::exp(-1.0 / (2.0 - u));
  const double q = std::exp(-1.0 / (u - 1.0));
  return p / (p + q);
}

double h_eps(const Mollifier& m, const CutoffSpec& c, double eps, double tau) {
  if (!(eps > 0.0)) throw DomainError("H_eps needs eps > 0");
  const double support = std::min(2.0 * c.scale, 1.0 / eps);
  const int panels = 32 + static_cast<int>(std::ceil(support * std::abs(tau) / kPi));
  auto f = [&](double t) { return c(t) * m.a_hat(eps * t) * std::cos(tau * t); };
  // break at the cutoff transitions, where c is smooth but steep
  std::vector<double> br{0.0};
  for (double b : {c.scale, 2.0 * c.scale}) {
    if (b < support) br.push_back(b);
  }
  br.push_back(support);
  double s = 0.0;
  for (std::size_t i = 1; i < br.size(); ++i) {
    const double len = br[i] - br[i - 1];
    const int p = std::max(8, static_cast<int>(std::ceil(panels * len / support)));
    s += integrate_checked(f, br[i - 1], br[i], p, 1e-13, 1e-10).value;
  }
  return 2.0 * s;
}

struct HEpsTable::Table {
  detail::UniformTable values;
};

HEpsTable::HEpsTable(const Mollifier& m, const CutoffSpec& c, double eps, double tau_max)
    : m_(m), c_(c), eps_(eps), tau_max_(std::abs(tau_max)) {
  if (!(eps > 0.0)) throw DomainError("H_eps needs eps > 0");
  const double support = std::min(2.0 * c.scale, 1.0 / eps);
  // aliases sit at distance >= tau_max + 800 from every tabulated argument
  const double dt = 2.0 * kPi / (2.0 * tau_max_ + 800.0);
  const auto half = static_cast<std::ptrdiff_t>(std::ceil(support / dt));
  // zero padding to 64 support widths gives a tau spacing of pi / (32 support)
  const int len = next_pow2(std::max<std::int64_t>(64 * half, 4 * half + 16));
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(len), 0.0);
  for (std::ptrdiff_t j = -half; j <= half; ++j) {
    const double t = static_cast<double>(j) * dt;
    const double v = c(t) * m.a_hat(eps * t);
    buf[static_cast<std::size_t>((j + len) % len)] = v;
  }
  const int dims[1] = {len};
  fft_inplace(buf, dims, -1);

  const double dtau = 2.0 * kPi / (len * dt);
  const auto count = static_cast<std::ptrdiff_t>(std::ceil(tau_max_ / dtau)) + kPad;
  if (count >= len / 2) throw NumericError("H_eps table too coarse for the requested range");
  std::vector<double> v(static_cast<std::size_t>(count + kPad + 1));
  for (std::ptrdiff_t k = -kPad; k <= count; ++k) {
    const auto idx = static_cast<std::size_t>((k + len) % len);
    v[static_cast<std::size_t>(k + kPad)] = dt * buf[idx].real();
  }
  auto table = std::make_shared<Table>();
  table->values = detail::UniformTable(-kPad * dtau, dtau, std::move(v));
  table_ = std::move(table);
}

double HEpsTable::operator()(double tau) const {
  tau = std::abs(tau);
  if (tau <= tau_max_) return table_->values(tau);
  return h_eps(m_, c_, eps_, tau);
}

double decay_constant(const std::function<double(double)>& f, int order, double tau_max,
                      double step) {
  double c = 0.0;
  for (double tau = 0.0; tau <= tau_max; tau += step) {
    c = std::max(c, std::pow(1.0 + tau, order) * std::abs(f(tau)));
  }
  return c;
}

}  // namespace clusterlab
