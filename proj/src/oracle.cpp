#include "lapdiag/oracle.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lapdiag {

namespace {

Eigen::MatrixXd dense_pinv_matrix(const Graph& g, std::size_t cap) {
    const std::size_t n = g.node_count();
    if (n == 0) throw std::domain_error("dense oracle: empty graph");
    if (n > cap)
        throw std::domain_error("dense oracle: N=" + std::to_string(n) + " exceeds cap " +
                                std::to_string(cap) + "; use approx_diag instead");
    if (!g.connected()) throw std::domain_error("dense oracle: graph is not connected");
    const double inv_n = 1.0 / double(n);
    Eigen::MatrixXd a = Eigen::MatrixXd::Constant(n, n, inv_n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) += g.strengths()[i];
    for (const auto& e : g.edges()) {
        a(e.u, e.v) -= e.w;
        a(e.v, e.u) -= e.w;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("dense oracle: factorization failed (disconnected input?)");
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
    inv.array() -= inv_n;
    return inv;
}

// union-find over a fixed small node set
struct Dsu {
    std::array<int, 32> parent;
    void reset(int n) { std::iota(parent.begin(), parent.begin() + n, 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

}  // namespace

std::vector<double> dense_pseudoinverse(const Graph& g, std::size_t cap) {
    Eigen::MatrixXd m = dense_pinv_matrix(g, cap);
    return std::vector<double>(m.data(), m.data() + m.size());
}

std::vector<double> exact_pseudoinverse_diag(const Graph& g, std::size_t cap) {
    Eigen::MatrixXd m = dense_pinv_matrix(g, cap);
    std::vector<double> diag(g.node_count());
    for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = m(i, i);
    return diag;
}

double exact_resistance(const Graph& g, std::uint32_t u, std::uint32_t v, std::size_t cap) {
    if (u >= g.node_count() || v >= g.node_count())
        throw std::domain_error("exact_resistance: node id out of range");
    if (u == v) return 0.0;
    Eigen::MatrixXd m = dense_pinv_matrix(g, cap);
    return m(u, u) + m(v, v) - m(u, v) - m(v, u);
}

std::vector<double> node_resistance_distances(const Graph& g, std::size_t cap) {
    Eigen::MatrixXd m = dense_pinv_matrix(g, cap);
    const double trace = m.trace();
    const double n = double(g.node_count());
    std::vector<double> r(g.node_count());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = n * m(i, i) + trace;
    return r;
}

double node_resistance_distance(const Graph& g, std::uint32_t u, std::size_t cap) {
    if (u >= g.node_count()) throw std::domain_error("node id out of range");
    return node_resistance_distances(g, cap)[u];
}

double kirchhoff_exact(const Graph& g, std::size_t cap) {
    Eigen::MatrixXd m = dense_pinv_matrix(g, cap);
    return double(g.node_count()) * m.trace();
}

double foster_check(const Graph& g, std::size_t cap) {
    Eigen::MatrixXd m = dense_pinv_matrix(g, cap);
    double acc = 0.0;
    for (const auto& e : g.edges())
        acc += e.w * (m(e.u, e.u) + m(e.v, e.v) - 2.0 * m(e.u, e.v));
    return acc;
}

std::vector<double> forest_weight_diag(const Graph& g) {
    const std::size_t n = g.node_count();
    const std::size_t m = g.edge_count();
    if (m > 20) throw std::domain_error("forest_weight_diag: M > 20");
    if (!g.connected()) throw std::domain_error("forest_weight_diag: graph is not connected");
    const auto& edges = g.edges();

    double f1 = 0.0;  // spanning rooted forests with 1 tree
    double f2 = 0.0;  // ... with 2 trees, all rootings
    std::vector<double> f2_ii(n, 0.0);

    Dsu dsu;
    std::array<int, 32> comp_size{};
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        dsu.reset(int(n));
        double weight = 1.0;
        bool acyclic = true;
        int picked = 0;
        for (std::size_t e = 0; e < m && acyclic; ++e) {
            if (!(mask >> e & 1u)) continue;
            if (!dsu.unite(int(edges[e].u), int(edges[e].v))) {
                acyclic = false;
                break;
            }
            weight *= edges[e].w;
            ++picked;
        }
        if (!acyclic) continue;
        const int trees = int(n) - picked;
        if (trees == 1) {
            // a spanning tree has one rooting per node
            f1 += weight * double(n);
        } else if (trees == 2) {
            comp_size.fill(0);
            for (std::size_t u = 0; u < n; ++u) ++comp_size[dsu.find(int(u))];
            int roots[2], nroots = 0;
            for (std::size_t u = 0; u < n; ++u)
                if (comp_size[u] > 0) roots[nroots++] = int(u);
            const double s0 = comp_size[roots[0]], s1 = comp_size[roots[1]];
            f2 += weight * s0 * s1;
            // tree containing i rooted at i, the other tree rooted anywhere
            for (std::size_t u = 0; u < n; ++u)
                f2_ii[u] += weight * (dsu.find(int(u)) == roots[0] ? s1 : s0);
        }
    }
    std::vector<double> diag(n);
    for (std::size_t u = 0; u < n; ++u) diag[u] = (f2_ii[u] - f2 / double(n)) / f1;
    return diag;
}

ErrorReport error_metrics(std::span<const double> exact, const DiagEstimate& estimate) {
    if (exact.size() != estimate.values.size())
        throw std::domain_error("error_metrics: length mismatch");
    ErrorReport report;
    report.n = exact.size();
    double exact_trace = 0.0, acc = 0.0;
    for (std::size_t u = 0; u < exact.size(); ++u) {
        if (exact[u] == 0.0)
            throw std::domain_error("error_metrics: zero exact entry at node " + std::to_string(u));
        const double rel = std::abs(exact[u] - estimate.values[u]) / exact[u];
        acc += rel;
        report.sigma_max = std::max(report.sigma_max, rel);
        exact_trace += exact[u];
    }
    report.sigma = acc / double(exact.size());
    const double exact_kirchhoff = double(exact.size()) * exact_trace;
    report.rho = (exact_kirchhoff - estimate.kirchhoff) / exact_kirchhoff;
    return report;
}

}  // namespace lapdiag
