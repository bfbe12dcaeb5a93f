#pragma once

#include <cstdint>
#include <vector>

#include "lapdiag/graph.hpp"
#include "lapdiag/solver.hpp"

namespace lapdiag {

/// JL sketch dimension k = ceil(24 ln(n) / epsilon^2) (natural log).
int jl_dimension(std::size_t n, double epsilon);

/// Solver tolerance (epsilon/3) sqrt((N-1)(1-eps) w_min / (N^4 (1+eps) w_max)).
double solver_tolerance(std::size_t n, double epsilon, double w_min, double w_max);

/// Sign of the random +-1/sqrt(k) projection matrix at (row, edge); a pure
/// function of (seed, row, edge) so rows can be built in any order.
double sketch_sign(std::uint64_t seed, int row, std::size_t edge);

/// Row i of Q W^{1/2} B as a vector over nodes.
std::vector<double> sketch_row(const Graph& g, int k, std::uint64_t seed, int row);

/// All k rows (small graphs / tests).
std::vector<std::vector<double>> sketch_rows(const Graph& g, int k, std::uint64_t seed);

struct DiagEstimate {
    std::vector<double> values;        ///< estimated diag of L^+, nonnegative
    double kirchhoff = 0.0;            ///< N * sum(values)
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    int k = 0;
    double delta = 0.0;                ///< solver tolerance actually used
    bool delta_clamped = false;        ///< true when the formula value fell below 1e-14
    std::vector<int> solve_iterations; ///< PCG iterations per sketch row
};

/// Randomized diagonal estimator: sketches W^{1/2} B L^+ with a JL projection
/// and one Laplacian solve per sketch row. Deterministic in (g, epsilon,
/// seed) regardless of `threads`. epsilon must lie in (0, 1/2].
DiagEstimate approx_diag(const Graph& g, double epsilon, std::uint64_t seed, int threads = 1);

}  // namespace lapdiag
