#pragma once

// Reference implementations used to derive and cross-check expected values.
// Deliberately independent of the library: plain loops, direct sums and
// Gauss-Legendre quadrature, no FFT and no shared cutoff code.

#include <complex>
#include <functional>
#include <vector>

namespace oracle {

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int order);

/// Composite Gauss-Legendre integral of f over [a, b] with `panels` equal panels.
double integrate(const std::function<double(double)>& f, double a, double b, int panels, int order = 16);

/// The smooth bump transform, written out directly from its definition.
double bump_hat(double xi);
/// The dyadic annulus symbol and the low-pass symbol, same recipe.
double low_pass_symbol(double xi);
double annulus_symbol(double xi);

/// phi(x) = (1/pi) int_0^{1/2} bump_hat(xi) cos(xi x) dxi by quadrature.
double phi(double x);
double phi_prime(double x);

/// ||phi^k||_{L^p(R)} by composite quadrature on [0, 1500] (phi is even).
double phi_power_norm(int k, double p);

/// Average of |cos|^p over a period: Gamma((p+1)/2) / (sqrt(pi) Gamma(p/2 + 1)).
double mean_abs_cos_power(double p);

/// lim ||phi^k(x) cos(lambda x)||_{L^p} = ||phi^k||_p (mean |cos|^p)^{1/p}.
double oscillation_limit(int k, double p);

/// Direct O(N^2) DFT, unnormalized, full spectrum.
std::vector<std::complex<double>> dense_dft(const std::vector<double>& x);

/// Convolution with the periodic Green's function of 1 - d^2/dx^2 on [-L, L),
/// or with its x-derivative, by the trapezoid rule on `points` nodes.
double periodic_green_convolution(const std::function<double(double)>& h, double x, double half_length, int points,
                                  bool derivative);

}  // namespace oracle
