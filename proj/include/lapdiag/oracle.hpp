#pragma once

#include <cstddef>
#include <vector>

#include "lapdiag/graph.hpp"
#include "lapdiag/sketch.hpp"

namespace lapdiag {

constexpr std::size_t kDefaultDenseCap = 20000;

/// Full dense pseudoinverse (L + J/N)^{-1} - J/N via an SPD Cholesky
/// factorization, row-major N x N. Refuses graphs over the cap.
std::vector<double> dense_pseudoinverse(const Graph& g, std::size_t cap = kDefaultDenseCap);

/// Diagonal of the dense pseudoinverse.
std::vector<double> exact_pseudoinverse_diag(const Graph& g, std::size_t cap = kDefaultDenseCap);

/// Effective resistance r_uv = L+_uu + L+_vv - 2 L+_uv; r_uu = 0.
double exact_resistance(const Graph& g, std::uint32_t u, std::uint32_t v,
                        std::size_t cap = kDefaultDenseCap);

/// R_u = N L+_uu + tr(L+), the sum of resistance distances from u.
double node_resistance_distance(const Graph& g, std::uint32_t u,
                                std::size_t cap = kDefaultDenseCap);

/// All node resistance distances from one factorization.
std::vector<double> node_resistance_distances(const Graph& g,
                                              std::size_t cap = kDefaultDenseCap);

/// Kirchhoff index N tr(L+).
double kirchhoff_exact(const Graph& g, std::size_t cap = kDefaultDenseCap);

/// Sum over edges of w_ij r_ij; equals N - 1 on connected graphs.
double foster_check(const Graph& g, std::size_t cap = kDefaultDenseCap);

/// Diagonal of L+ from spanning-rooted-forest weights by enumerating all
/// 2^M edge subsets (requires M <= 20). Independent combinatorial oracle.
std::vector<double> forest_weight_diag(const Graph& g);

struct ErrorReport {
    double sigma = 0.0;      ///< mean relative error of the diagonal
    double sigma_max = 0.0;  ///< max relative error of the diagonal
    double rho = 0.0;        ///< (delta - delta~) / delta for the Kirchhoff index
    std::size_t n = 0;
};

/// Compares an estimate to the exact diagonal. The exact Kirchhoff index is
/// N * sum(exact). Throws std::domain_error on a zero exact entry.
ErrorReport error_metrics(std::span<const double> exact, const DiagEstimate& estimate);

}  // namespace lapdiag
