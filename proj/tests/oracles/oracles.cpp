#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oracle {

GaussRule gauss_legendre(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

double integrate(const std::function<double(double)>& f, double a, double b, int panels, int order) {
  static thread_local int cached_order = 0;
  static thread_local GaussRule rule;
  if (cached_order != order) {
    rule = gauss_legendre(order);
    cached_order = order;
  }
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double mid = a + (k + 0.5) * h;
    for (int i = 0; i < order; ++i) sum += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
  }
  return 0.5 * h * sum;
}

namespace {

double psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double step(double t) {
  const double a = psi(t);
  const double b = psi(1.0 - t);
  return a / (a + b);
}

}  // namespace

double bump_hat(double xi) { return step(2.0 - 4.0 * std::abs(xi)); }
double low_pass_symbol(double xi) { return step((4.0 / 3.0 - std::abs(xi)) * 12.0 / 7.0); }
double annulus_symbol(double xi) { return low_pass_symbol(xi / 2.0) - low_pass_symbol(xi); }

double phi(double x) {
  // bump_hat = 1 on [0, 1/4]: that piece integrates in closed form.
  const double flat = std::abs(x) < 1e-12 ? 0.25 : std::sin(0.25 * x) / x;
  const int panels = 8 + static_cast<int>(std::abs(x) / 4.0);
  const double ramp = integrate([x](double xi) { return bump_hat(xi) * std::cos(xi * x); }, 0.25, 0.5, panels);
  return (flat + ramp) / std::numbers::pi;
}

double phi_prime(double x) {
  const double flat = std::abs(x) < 1e-6 ? -x / 192.0 : (0.25 * x * std::cos(0.25 * x) - std::sin(0.25 * x)) / (x * x);
  const int panels = 8 + static_cast<int>(std::abs(x) / 4.0);
  const double ramp =
      integrate([x](double xi) { return -xi * bump_hat(xi) * std::sin(xi * x); }, 0.25, 0.5, panels);
  return (flat + ramp) / std::numbers::pi;
}

double phi_power_norm(int k, double p) {
  const double half = integrate([k, p](double x) { return std::pow(std::abs(std::pow(phi(x), k)), p); }, 0.0, 1500.0,
                                3000, 16);
  return std::pow(2.0 * half, 1.0 / p);
}

double mean_abs_cos_power(double p) {
  return std::tgamma((p + 1.0) / 2.0) / (std::sqrt(std::numbers::pi) * std::tgamma(p / 2.0 + 1.0));
}

double oscillation_limit(int k, double p) { return phi_power_norm(k, p) * std::pow(mean_abs_cos_power(p), 1.0 / p); }

std::vector<std::complex<double>> dense_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((k * j) % n) / static_cast<double>(n);
      acc += x[j] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

double periodic_green_convolution(const std::function<double(double)>& h, double x, double half_length, int points,
                                  bool derivative) {
  // On [-L, L): G(z) = cosh(L - |z|) / (2 sinh L), G'(z) = -sign(z) sinh(L - |z|) / (2 sinh L).
  const double L = half_length;
  const double dy = 2.0 * L / points;
  const double denom = 2.0 * std::sinh(L);
  double sum = 0.0;
  for (int i = 0; i < points; ++i) {
    // nodes centred on x so the kink of G' sits exactly on node i = points / 2
    const double z = L - i * dy;
    const double y = x - z;
    double kernel;
    if (!derivative) {
      kernel = std::cosh(L - std::abs(z)) / denom;
    } else if (2 * i == points) {
      kernel = 0.0;  // average of the one-sided limits
    } else {
      kernel = -(z > 0 ? 1.0 : -1.0) * std::sinh(L - std::abs(z)) / denom;
    }
    sum += kernel * h(y);
  }
  return sum * dy;
}

}  // namespace oracle
