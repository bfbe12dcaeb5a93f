#include "lapdiag/solver.hpp"

#include <cmath>
#include <cstring>
#include <string>

namespace lapdiag {

SolveFailure::SolveFailure(int iterations_, double rel_residual_)
    : std::runtime_error("lapl_solve: no convergence after " + std::to_string(iterations_) +
                         " iterations (relative residual " + std::to_string(rel_residual_) + ")"),
      iterations(iterations_),
      rel_residual(rel_residual_) {}

namespace {

// Lockstep PCG over W interleaved right-hand sides. Every per-lane reduction
// runs in node order, so lane arithmetic does not depend on W and the batch
// reproduces single-RHS solves bit for bit.
//
// The null-space re-projection is carried as a scalar offset per lane instead
// of a per-iteration vector pass: the stored residual equals the projected
// residual plus roff * 1, and the quantities ||r||^2, (r, M^-1 r) of the
// projected residual are recovered from raw moments accumulated during the
// x/r update pass. Three vector passes per iteration total.
template <int W>
std::vector<SolveResult> pcg_batch(const Graph& g, std::span<const std::vector<double>> ys,
                                   const SolveOptions& opts) {
    const std::size_t n = g.node_count();
    const int lanes = static_cast<int>(ys.size());
    const double tol_res = opts.tolerance / 10.0;
    const int max_it = opts.max_iterations > 0
                           ? opts.max_iterations
                           : 10 * static_cast<int>(std::ceil(std::sqrt(double(n)))) + 1000;
    const bool jacobi = opts.preconditioner == SolveOptions::Precond::diagonal;
    const auto& s = g.strengths();
    std::vector<double> inv_s(n, 1.0);
    double sum_inv = double(n);
    if (jacobi) {
        sum_inv = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            inv_s[i] = 1.0 / s[i];
            sum_inv += inv_s[i];
        }
    }

    std::vector<double> x_buf(n * W, 0.0), r_buf(n * W, 0.0), p_buf(n * W, 0.0),
        ap_buf(n * W, 0.0);
    double* __restrict x = x_buf.data();
    double* __restrict r = r_buf.data();
    double* __restrict p = p_buf.data();
    double* __restrict ap = ap_buf.data();
    const double* __restrict isv = inv_s.data();
    const double* __restrict sv = s.data();
    double rz[W], ynorm[W], rnorm[W], roff[W];
    bool active[W];
    SolveResult out[W];

    for (int c = 0; c < W; ++c) {
        rz[c] = 0.0;
        ynorm[c] = 0.0;
        rnorm[c] = 0.0;
        roff[c] = 0.0;
        active[c] = false;
    }
    for (int c = 0; c < lanes; ++c) {
        if (ys[c].size() != n) throw std::domain_error("lapl_solve: length mismatch");
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += ys[c][i];
        mean /= double(n);
        double nrm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double yi = ys[c][i] - mean;
            r[i * W + c] = yi;
            nrm2 += yi * yi;
        }
        ynorm[c] = std::sqrt(nrm2);
        active[c] = ynorm[c] > 0.0;
        if (!active[c]) {
            out[c].converged = true;  // y in the span of 1: x = 0
        }
    }
    for (int c = 0; c < lanes; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double zi = r[i * W + c] * inv_s[i];
            p[i * W + c] = zi;
            acc += r[i * W + c] * zi;
        }
        rz[c] = acc;
    }

    int it = 0;
    auto any_active = [&] {
        for (int c = 0; c < lanes; ++c)
            if (active[c]) return true;
        return false;
    };
    while (any_active() && it < max_it) {
        ++it;
        // pass 1: ap = L p, fused with the p^T A p reduction
        double pap[W];
        for (int c = 0; c < W; ++c) pap[c] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto nbr = g.neighbors(static_cast<std::uint32_t>(i));
            const auto wts = g.neighbor_weights(static_cast<std::uint32_t>(i));
            double acc[W];
            const double si = sv[i];
            for (int c = 0; c < W; ++c) acc[c] = si * p[i * W + c];
            for (std::size_t t = 0; t < nbr.size(); ++t) {
                const double w = wts[t];
                const std::size_t j = nbr[t];
                for (int c = 0; c < W; ++c) acc[c] -= w * p[j * W + c];
            }
            for (int c = 0; c < W; ++c) {
                ap[i * W + c] = acc[c];
                pap[c] += p[i * W + c] * acc[c];
            }
        }
        double alpha[W], s1[W], s2[W], t1[W], t2[W];
        for (int c = 0; c < W; ++c) {
            alpha[c] = (active[c] && pap[c] != 0.0) ? rz[c] / pap[c] : 0.0;
            s1[c] = 0.0;
            s2[c] = 0.0;
            t1[c] = 0.0;
            t2[c] = 0.0;
        }
        // pass 2: x += alpha p, r -= alpha ap, with the raw residual moments
        // S1 = sum r, S2 = sum r^2, T1 = sum r/s, T2 = sum r^2/s
        for (std::size_t i = 0; i < n; ++i) {
            const double isi = isv[i];
            for (int c = 0; c < W; ++c) {
                const double xi = x[i * W + c] + alpha[c] * p[i * W + c];
                const double ri = r[i * W + c] - alpha[c] * ap[i * W + c];
                x[i * W + c] = xi;
                r[i * W + c] = ri;
                s1[c] += ri;
                s2[c] += ri * ri;
                t1[c] += ri * isi;
                t2[c] += ri * ri * isi;
            }
        }
        // projected residual r - m*1 with m = S1/n:
        //   ||r - m||^2        = S2 - n m^2
        //   (r - m, M^-1(r-m)) = T2 - 2 m T1 + m^2 sum(1/s)
        double beta[W];
        for (int c = 0; c < W; ++c) {
            const double m = active[c] ? s1[c] / double(n) : 0.0;
            roff[c] = m;
            const double rn2 = std::max(s2[c] - double(n) * m * m, 0.0);
            const double rz_new = t2[c] - 2.0 * m * t1[c] + m * m * sum_inv;
            rnorm[c] = std::sqrt(rn2);
            beta[c] = (active[c] && rz[c] != 0.0) ? rz_new / rz[c] : 0.0;
            if (active[c]) rz[c] = rz_new;
        }
        // pass 3: p = M^-1 (r - roff) + beta p
        for (std::size_t i = 0; i < n; ++i) {
            const double isi = isv[i];
            for (int c = 0; c < W; ++c)
                p[i * W + c] = (r[i * W + c] - roff[c]) * isi + beta[c] * p[i * W + c];
        }
        for (int c = 0; c < lanes; ++c) {
            if (active[c] && rnorm[c] <= tol_res * ynorm[c]) {
                active[c] = false;
                out[c].converged = true;
                out[c].iterations = it;
                out[c].rel_residual = rnorm[c] / ynorm[c];
            }
        }
    }
    std::vector<SolveResult> results(lanes);
    for (int c = 0; c < lanes; ++c) {
        if (active[c]) {
            out[c].converged = false;
            out[c].iterations = it;
            out[c].rel_residual = ynorm[c] > 0.0 ? rnorm[c] / ynorm[c] : 0.0;
        }
        // exact zero-sum via a final mean subtraction
        out[c].x.resize(n);
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += x[i * W + c];
        mean /= double(n);
        for (std::size_t i = 0; i < n; ++i) out[c].x[i] = x[i * W + c] - mean;
        results[c] = std::move(out[c]);
    }
    return results;
}

}  // namespace

namespace detail {

std::vector<SolveResult> lapl_solve_batch(const Graph& g,
                                          std::span<const std::vector<double>> ys,
                                          const SolveOptions& opts) {
    if (!g.connected()) throw std::domain_error("lapl_solve: graph is not connected");
    if (!(opts.tolerance > 0.0 && opts.tolerance < 1.0))
        throw std::domain_error("lapl_solve: tolerance must be in (0, 1)");
    if (ys.empty()) return {};
    switch (ys.size()) {
        case 1:
            return pcg_batch<1>(g, ys, opts);
        case 2:
            return pcg_batch<2>(g, ys, opts);
        case 3:
            return pcg_batch<3>(g, ys, opts);
        case 4:
            return pcg_batch<4>(g, ys, opts);
        default: {
            std::vector<SolveResult> all;
            all.reserve(ys.size());
            std::size_t i = 0;
            while (i < ys.size()) {
                const std::size_t rem = ys.size() - i;
                const std::size_t w = rem >= 8 ? 8 : std::min<std::size_t>(rem, 4);
                std::vector<SolveResult> part;
                if (w == 8)
                    part = pcg_batch<8>(g, ys.subspan(i, 8), opts);
                else
                    part = lapl_solve_batch(g, ys.subspan(i, w), opts);
                for (auto& r : part) all.push_back(std::move(r));
                i += w;
            }
            return all;
        }
    }
}

}  // namespace detail

SolveResult lapl_solve(const Graph& g, std::span<const double> y, const SolveOptions& opts) {
    std::vector<std::vector<double>> ys{std::vector<double>(y.begin(), y.end())};
    auto results = detail::lapl_solve_batch(g, ys, opts);
    if (!results[0].converged)
        throw SolveFailure(results[0].iterations, results[0].rel_residual);
    return std::move(results[0]);
}

}  // namespace lapdiag
