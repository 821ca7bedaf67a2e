#include "besovlab/nonlocal.hpp"

#include <algorithm>
#include <string>

#include "besovlab/errors.hpp"

namespace besovlab {

int nonlinearity_degree(EquationKind kind) noexcept { return kind == EquationKind::CamassaHolm ? 2 : 3; }

double dealias_fraction(EquationKind kind) noexcept {
  return kind == EquationKind::CamassaHolm ? 2.0 / 3.0 : 0.5;
}

std::string_view to_string(EquationKind kind) noexcept {
  return kind == EquationKind::CamassaHolm ? "ch" : "novikov";
}

EquationKind parse_equation_kind(std::string_view text) {
  if (text == "ch" || text == "camassa-holm" || text == "CH") return EquationKind::CamassaHolm;
  if (text == "novikov" || text == "nov") return EquationKind::Novikov;
  throw InvalidArgument("unknown equation kind '" + std::string(text) + "' (expected ch or novikov)");
}

RhsEvaluator::RhsEvaluator(EquationKind kind, const Grid& grid)
    : RhsEvaluator(kind, grid, dealias_fraction(kind)) {}

RhsEvaluator::RhsEvaluator(EquationKind kind, const Grid& grid, double keep_fraction)
    : kind_(kind),
      grid_(grid),
      keep_fraction_(keep_fraction),
      derivative_(grid.spectral_size()),
      helmholtz_(grid.spectral_size()),
      u_hat_(grid.spectral_size()),
      u_x_(grid.size()),
      product_(grid.size()),
      transport_hat_(grid.spectral_size()),
      source_a_hat_(grid.spectral_size()),
      source_b_hat_(grid.spectral_size()),
      assembled_(grid.spectral_size()) {
  dealias_cutoff(grid.size(), keep_fraction);
  for (std::size_t k = 0; k < derivative_.size(); ++k) {
    const double xi = grid.frequency(static_cast<double>(k));
    derivative_[k] = {0.0, xi};
    helmholtz_[k] = 1.0 / (1.0 + xi * xi);
  }
  derivative_.back() = 0.0;
}

void RhsEvaluator::prepare(std::span<const double> u) {
  if (u.size() != grid_.size()) throw InvalidArgument("rhs: state size does not match the grid");
  forward_dft(u, u_hat_);
  for (std::size_t k = 0; k < assembled_.size(); ++k) assembled_[k] = derivative_[k] * u_hat_[k];
  inverse_dft(assembled_, u_x_);
}

void RhsEvaluator::transform_product(std::span<const double> values, ComplexBuffer& target) {
  forward_dft(values, target);
  dealias_in_place(target, grid_.size(), keep_fraction_);
}

void RhsEvaluator::assemble(unsigned parts, std::span<double> out) {
  const bool transport = (parts & kTransport) != 0;
  const bool sources = (parts & kSources) != 0;
  for (std::size_t k = 0; k < assembled_.size(); ++k) {
    std::complex<double> v = transport ? -transport_hat_[k] : 0.0;
    if (sources) {
      if (kind_ == EquationKind::CamassaHolm) {
        v -= derivative_[k] * helmholtz_[k] * source_a_hat_[k];
      } else {
        v -= 0.5 * helmholtz_[k] * source_a_hat_[k] + derivative_[k] * helmholtz_[k] * source_b_hat_[k];
      }
    }
    assembled_[k] = v;
  }
  inverse_dft(assembled_, out);
}

void RhsEvaluator::evaluate(std::span<const double> u, std::span<double> out) {
  prepare(u);
  const std::size_t n = u.size();
  if (kind_ == EquationKind::CamassaHolm) {
    for (std::size_t i = 0; i < n; ++i) product_[i] = u[i] * u_x_[i];
    transform_product(product_, transport_hat_);
    for (std::size_t i = 0; i < n; ++i) product_[i] = u[i] * u[i] + 0.5 * u_x_[i] * u_x_[i];
    transform_product(product_, source_a_hat_);
  } else {
    for (std::size_t i = 0; i < n; ++i) product_[i] = u[i] * u[i] * u_x_[i];
    transform_product(product_, transport_hat_);
    for (std::size_t i = 0; i < n; ++i) product_[i] = u_x_[i] * u_x_[i] * u_x_[i];
    transform_product(product_, source_a_hat_);
    for (std::size_t i = 0; i < n; ++i) product_[i] = 1.5 * u[i] * u_x_[i] * u_x_[i] + u[i] * u[i] * u[i];
    transform_product(product_, source_b_hat_);
  }
  assemble(kTransport | kSources, out);
}

void RhsEvaluator::evaluate_drift(std::span<const double> u, std::span<double> out) {
  prepare(u);
  const std::size_t n = u.size();
  const double power = kind_ == EquationKind::CamassaHolm ? 1.0 : 2.0;
  for (std::size_t i = 0; i < n; ++i) product_[i] = (power == 1.0 ? u[i] : u[i] * u[i]) * u_x_[i];
  transform_product(product_, transport_hat_);
  assemble(kTransport, out);
}

void RhsEvaluator::evaluate_sources(std::span<const double> u, std::span<double> out, std::span<double> q1,
                                    std::span<double> q2) {
  prepare(u);
  const std::size_t n = u.size();
  if (kind_ == EquationKind::CamassaHolm) {
    for (std::size_t i = 0; i < n; ++i) product_[i] = u[i] * u[i] + 0.5 * u_x_[i] * u_x_[i];
    transform_product(product_, source_a_hat_);
    assemble(kSources, out);
    return;
  }
  for (std::size_t i = 0; i < n; ++i) product_[i] = u_x_[i] * u_x_[i] * u_x_[i];
  transform_product(product_, source_a_hat_);
  for (std::size_t i = 0; i < n; ++i) product_[i] = 1.5 * u[i] * u_x_[i] * u_x_[i] + u[i] * u[i] * u[i];
  transform_product(product_, source_b_hat_);
  assemble(kSources, out);
  if (!q1.empty()) {
    for (std::size_t k = 0; k < assembled_.size(); ++k) assembled_[k] = -0.5 * helmholtz_[k] * source_a_hat_[k];
    inverse_dft(assembled_, q1);
  }
  if (!q2.empty()) {
    for (std::size_t k = 0; k < assembled_.size(); ++k) {
      assembled_[k] = -derivative_[k] * helmholtz_[k] * source_b_hat_[k];
    }
    inverse_dft(assembled_, q2);
  }
}

Field helmholtz_inverse(const Field& f) { return apply_multiplier(f, Multiplier::helmholtz_inverse(f.grid())); }

Field ch_source(const Field& u) {
  RhsEvaluator eval(EquationKind::CamassaHolm, u.grid());
  RealBuffer out(u.size());
  eval.evaluate_sources(u.values(), out);
  return Field(u.grid(), std::move(out));
}

std::pair<Field, Field> novikov_sources(const Field& u) {
  RhsEvaluator eval(EquationKind::Novikov, u.grid());
  RealBuffer sum(u.size());
  RealBuffer q1(u.size());
  RealBuffer q2(u.size());
  eval.evaluate_sources(u.values(), sum, q1, q2);
  return {Field(u.grid(), std::move(q1)), Field(u.grid(), std::move(q2))};
}

Field rhs(EquationKind kind, const Field& u) {
  RhsEvaluator eval(kind, u.grid());
  RealBuffer out(u.size());
  eval.evaluate(u.values(), out);
  return Field(u.grid(), std::move(out));
}

Field drift(EquationKind kind, const Field& u0) {
  RhsEvaluator eval(kind, u0.grid());
  RealBuffer out(u0.size());
  eval.evaluate_drift(u0.values(), out);
  return Field(u0.grid(), std::move(out));
}

}  // namespace besovlab
