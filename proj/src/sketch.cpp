#include "lapdiag/sketch.hpp"

#include <cmath>
#include <future>
#include <stdexcept>
#include <string>

namespace lapdiag {

namespace {

constexpr double kDeltaFloor = 1e-14;

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

int jl_dimension(std::size_t n, double epsilon) {
    if (n < 2) throw std::domain_error("jl_dimension: need at least 2 nodes");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("jl_dimension: epsilon must be in (0, 1)");
    return static_cast<int>(std::ceil(24.0 * std::log(double(n)) / (epsilon * epsilon)));
}

double solver_tolerance(std::size_t n, double epsilon, double w_min, double w_max) {
    if (n < 2) throw std::domain_error("solver_tolerance: need at least 2 nodes");
    if (!(epsilon > 0.0 && epsilon <= 0.5))
        throw std::domain_error("solver_tolerance: epsilon must be in (0, 1/2]");
    if (!(w_min > 0.0 && w_min <= w_max))
        throw std::domain_error("solver_tolerance: need 0 < w_min <= w_max");
    const double nn = double(n);
    return epsilon / 3.0 *
           std::sqrt((nn - 1.0) * (1.0 - epsilon) * w_min /
                     (nn * nn * nn * nn * (1.0 + epsilon) * w_max));
}

double sketch_sign(std::uint64_t seed, int row, std::size_t edge) {
    const std::uint64_t h =
        mix64(mix64(seed ^ 0x736b65746368ULL) ^ (std::uint64_t(std::uint32_t(row)) << 32 ^ edge));
    return (h & 1) ? 1.0 : -1.0;
}

std::vector<double> sketch_row(const Graph& g, int k, std::uint64_t seed, int row) {
    if (k < 1) throw std::domain_error("sketch_row: k must be >= 1");
    const double scale = 1.0 / std::sqrt(double(k));
    std::vector<double> q(g.node_count(), 0.0);
    const auto& edges = g.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const double s = sketch_sign(seed, row, e) * scale * std::sqrt(edges[e].w);
        q[edges[e].u] += s;
        q[edges[e].v] -= s;
    }
    return q;
}

std::vector<std::vector<double>> sketch_rows(const Graph& g, int k, std::uint64_t seed) {
    std::vector<std::vector<double>> rows;
    rows.reserve(k);
    for (int i = 0; i < k; ++i) rows.push_back(sketch_row(g, k, seed, i));
    return rows;
}

DiagEstimate approx_diag(const Graph& g, double epsilon, std::uint64_t seed, int threads) {
    if (!g.connected()) throw std::domain_error("approx_diag: graph is not connected");
    if (!(epsilon > 0.0 && epsilon <= 0.5))
        throw std::domain_error("approx_diag: epsilon must be in (0, 1/2]");
    const std::size_t n = g.node_count();

    DiagEstimate est;
    est.epsilon = epsilon;
    est.seed = seed;
    est.k = jl_dimension(n, epsilon);
    const double delta_formula = solver_tolerance(n, epsilon, g.w_min(), g.w_max());
    est.delta_clamped = delta_formula < kDeltaFloor;
    est.delta = est.delta_clamped ? kDeltaFloor : delta_formula;
    est.values.assign(n, 0.0);
    est.solve_iterations.resize(est.k);

    SolveOptions opts;
    opts.tolerance = est.delta;

    // Rows are grouped into fixed-width batches and accumulated strictly in
    // row order, so the result is independent of the worker count.
    constexpr int kBatch = 8;
    const int n_batches = (est.k + kBatch - 1) / kBatch;
    const int workers = std::max(1, threads);

    auto solve_batch = [&](int b) {
        const int lo = b * kBatch;
        const int hi = std::min(est.k, lo + kBatch);
        std::vector<std::vector<double>> ys;
        ys.reserve(hi - lo);
        for (int i = lo; i < hi; ++i) ys.push_back(sketch_row(g, est.k, seed, i));
        return detail::lapl_solve_batch(g, ys, opts);
    };
    auto accumulate = [&](int b, const std::vector<SolveResult>& results) {
        const int lo = b * kBatch;
        for (std::size_t c = 0; c < results.size(); ++c) {
            const auto& res = results[c];
            if (!res.converged)
                throw SolveFailure(res.iterations, res.rel_residual);
            est.solve_iterations[lo + int(c)] = res.iterations;
            for (std::size_t u = 0; u < n; ++u) est.values[u] += res.x[u] * res.x[u];
        }
    };

    if (workers == 1) {
        for (int b = 0; b < n_batches; ++b) accumulate(b, solve_batch(b));
    } else {
        for (int stripe = 0; stripe < n_batches; stripe += workers) {
            const int end = std::min(n_batches, stripe + workers);
            std::vector<std::future<std::vector<SolveResult>>> inflight;
            inflight.reserve(end - stripe);
            for (int b = stripe; b < end; ++b)
                inflight.push_back(std::async(std::launch::async, solve_batch, b));
            for (int b = stripe; b < end; ++b) accumulate(b, inflight[b - stripe].get());
        }
    }

    double trace = 0.0;
    for (double v : est.values) trace += v;
    est.kirchhoff = double(n) * trace;
    return est;
}

}  // namespace lapdiag
