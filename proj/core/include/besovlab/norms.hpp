#pragma once

#include <limits>
#include <span>
#include <vector>

#include "besovlab/cutoffs.hpp"
#include "besovlab/field.hpp"
#include "besovlab/spectral.hpp"

namespace besovlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Rectangle-rule L^p norm on the periodic grid; p = kInfinity gives the max norm.
double lebesgue_norm(const Field& f, double p);

/// Dyadic block Delta_j f: chi(D)f for j = -1, phi(2^-j D)f for j >= 0, zero for j <= -2.
Field lp_block(const Field& f, int j, const CutoffSystem& cs);

/// ||Delta_j f||_{L^p} for j = -1..cs.max_block(), stored at index j + 1.
/// p = 2 is evaluated from the spectrum by Parseval without inverse transforms.
std::vector<double> block_norms(const Field& f, double p, const CutoffSystem& cs);
std::vector<double> block_norms(const Spectrum& spectrum, double p, const CutoffSystem& cs);

/// (sum_j (2^{sj} b_j)^r)^{1/r} over block norms indexed from j = -1.
double besov_from_blocks(std::span<const double> blocks, double s, double r);

/// ||f||_{B^s_{p,r}}; uses idx.s (not idx.sigma). Throws UnsupportedConfiguration for r = infinity.
double besov_norm(const Field& f, const BesovIndex& idx, const CutoffSystem& cs);

/// ||f||_inf + ||f'||_inf.
double lipschitz_norm(const Field& f);

}  // namespace besovlab
