#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "lapdiag/graph.hpp"

namespace lapdiag {

struct SolveOptions {
    /// Contract accuracy theta for ||x - L^+ y||_L <= theta ||L^+ y||_L.
    /// The iteration stops at the surrogate relative residual theta / 10.
    double tolerance = 1e-6;
    /// 0 selects the default 10 * ceil(sqrt(N)) + 1000.
    int max_iterations = 0;
    enum class Precond { none, diagonal };
    Precond preconditioner = Precond::diagonal;
};

struct SolveResult {
    std::vector<double> x;
    int iterations = 0;
    double rel_residual = 0.0;
    bool converged = false;
};

/// Thrown when the iteration fails to reach the surrogate tolerance.
class SolveFailure : public std::runtime_error {
public:
    SolveFailure(int iterations, double rel_residual);
    int iterations;
    double rel_residual;
};

/// Solves L x = y on the subspace orthogonal to the all-ones vector with
/// preconditioned conjugate gradient. y is orthogonalized internally; the
/// returned x satisfies 1^T x = 0 via an explicit mean subtraction after the
/// iteration. Initial iterate is zero. Throws std::domain_error on a
/// disconnected graph, SolveFailure on non-convergence.
SolveResult lapl_solve(const Graph& g, std::span<const double> y, const SolveOptions& opts);

namespace detail {

/// Runs `width` independent PCG chains in lockstep over a shared adjacency
/// traversal. Chain c solves L x = ys[c] with exactly the same arithmetic as
/// lapl_solve, so results are bitwise identical to one solve per chain.
std::vector<SolveResult> lapl_solve_batch(const Graph& g,
                                          std::span<const std::vector<double>> ys,
                                          const SolveOptions& opts);

}  // namespace detail

}  // namespace lapdiag
