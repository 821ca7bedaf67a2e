#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "besovlab/fft.hpp"
#include "besovlab/field.hpp"
#include "besovlab/spectral.hpp"

namespace besovlab {

enum class EquationKind { CamassaHolm, Novikov };

/// 2 for Camassa-Holm (u u_x), 3 for Novikov (u^2 u_x).
int nonlinearity_degree(EquationKind kind) noexcept;
/// 2/3 rule for quadratic, 1/2 rule for cubic nonlinearities.
double dealias_fraction(EquationKind kind) noexcept;
std::string_view to_string(EquationKind kind) noexcept;
/// Accepts "ch", "camassa-holm", "novikov". Throws InvalidArgument otherwise.
EquationKind parse_equation_kind(std::string_view text);

/// (1 - d^2/dx^2)^{-1} as the multiplier 1/(1 + xi^2).
Field helmholtz_inverse(const Field& f);

/// P(u) = -d/dx (1 - d^2/dx^2)^{-1} (u^2 + u_x^2 / 2), products 2/3-dealiased.
Field ch_source(const Field& u);

/// (Q1(u), Q2(u)) with Q1 = -1/2 (1 - d^2/dx^2)^{-1} u_x^3 and
/// Q2 = -d/dx (1 - d^2/dx^2)^{-1} (3/2 u u_x^2 + u^3); products 1/2-dealiased.
std::pair<Field, Field> novikov_sources(const Field& u);

/// Transport-form right-hand side: -u u_x + P(u) (CH) or -u^2 u_x + Q1 + Q2 (Novikov).
Field rhs(EquationKind kind, const Field& u);

/// First-order drift: -u0 u0_x (CH) or -u0^2 u0_x (Novikov), dealiased like rhs.
Field drift(EquationKind kind, const Field& u0);

/// Pseudospectral right-hand side evaluator with preallocated scratch space.
/// Products are formed in physical space, linear operators applied in
/// spectral space. One instance per thread.
class RhsEvaluator {
 public:
  RhsEvaluator(EquationKind kind, const Grid& grid, double keep_fraction);
  RhsEvaluator(EquationKind kind, const Grid& grid);

  EquationKind kind() const noexcept { return kind_; }
  const Grid& grid() const noexcept { return grid_; }

  /// out = rhs(u).
  void evaluate(std::span<const double> u, std::span<double> out);
  /// out = transport part only (the drift).
  void evaluate_drift(std::span<const double> u, std::span<double> out);
  /// out = nonlocal sources only (P, or Q1 + Q2); q1/q2 receive the separate Novikov terms when non-empty.
  void evaluate_sources(std::span<const double> u, std::span<double> out,
                        std::span<double> q1 = {}, std::span<double> q2 = {});

 private:
  enum Part : unsigned { kTransport = 1u, kSources = 2u };
  void prepare(std::span<const double> u);
  void transform_product(std::span<const double> values, ComplexBuffer& target);
  void assemble(unsigned parts, std::span<double> out);

  EquationKind kind_;
  Grid grid_;
  double keep_fraction_;
  std::vector<std::complex<double>> derivative_;
  std::vector<double> helmholtz_;
  ComplexBuffer u_hat_;
  RealBuffer u_x_;
  RealBuffer product_;
  ComplexBuffer transport_hat_;
  ComplexBuffer source_a_hat_;
  ComplexBuffer source_b_hat_;
  ComplexBuffer assembled_;
};

}  // namespace besovlab
