#include <doctest.h>

#include <cmath>

#include "lapdiag/graph.hpp"
#include "lapdiag/oracle.hpp"
#include "lapdiag/sketch.hpp"

using lapdiag::Graph;
using lapdiag::approx_diag;
using lapdiag::jl_dimension;
using lapdiag::parse_edge_list;
using lapdiag::sketch_row;
using lapdiag::solver_tolerance;

namespace {
Graph triangle() { return parse_edge_list("0 1\n1 2\n0 2\n").graph; }
}  // namespace

TEST_CASE("jl_dimension") {
    CHECK(jl_dimension(9, 0.5) == 211);
    CHECK(jl_dimension(198, 0.3) == 1411);
    CHECK(jl_dimension(2, 0.5) == 67);
    CHECK_THROWS_AS(jl_dimension(9, 0.0), std::domain_error);
    CHECK_THROWS_AS(jl_dimension(9, 1.0), std::domain_error);
    CHECK_THROWS_AS(jl_dimension(1, 0.5), std::domain_error);
}

TEST_CASE("solver_tolerance") {
    CHECK(solver_tolerance(9, 0.3, 1, 1) == doctest::Approx(2.5623e-3).epsilon(1e-4));
    CHECK(solver_tolerance(3, 0.3, 1, 1) ==
          doctest::Approx(0.1 * std::sqrt(2.0 * 0.7 / (81.0 * 1.3))).epsilon(1e-12));
    // only the ratio w_min/w_max matters
    CHECK(solver_tolerance(50, 0.25, 3.0, 3.0) ==
          doctest::Approx(solver_tolerance(50, 0.25, 0.125, 0.125)).epsilon(1e-14));
    CHECK_THROWS_AS(solver_tolerance(9, 0.6, 1, 1), std::domain_error);
    CHECK_THROWS_AS(solver_tolerance(9, 0.3, 2, 1), std::domain_error);
}

TEST_CASE("sketch rows sum to zero and are deterministic") {
    auto g = triangle();
    for (int i = 0; i < 5; ++i) {
        auto q = sketch_row(g, 7, 99, i);
        double sum = 0.0;
        for (double v : q) sum += v;
        CHECK(sum == doctest::Approx(0.0).epsilon(1e-15));
        auto q2 = sketch_row(g, 7, 99, i);
        CHECK(q == q2);
    }
}

TEST_CASE("sketch row on a single edge is +-(1,-1)/sqrt(k)") {
    auto g = parse_edge_list("0 1\n").graph;
    auto q = sketch_row(g, 1, 5, 0);
    CHECK(std::abs(q[0]) == doctest::Approx(1.0));
    CHECK(q[1] == doctest::Approx(-q[0]));
}

TEST_CASE("sketch preserves norms in expectation") {
    // E||Q v||^2 = ||v||^2 with v = W^{1/2} B e_0 on the triangle (norm^2 = 2)
    auto g = triangle();
    const int k = 16;
    auto v = g.incidence_apply(std::vector<double>{1, 0, 0});
    double acc = 0.0;
    const int n_seeds = 1000;
    for (int seed = 0; seed < n_seeds; ++seed) {
        double total = 0.0;
        for (int i = 0; i < k; ++i) {
            double dot = 0.0;
            const double scale = 1.0 / std::sqrt(double(k));
            for (std::size_t e = 0; e < g.edge_count(); ++e)
                dot += lapdiag::sketch_sign(seed, i, e) * scale * v[e];
            total += dot * dot;
        }
        acc += total;
    }
    CHECK(acc / n_seeds == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("approx_diag on the triangle stays in the (1 +- eps)^2 envelope") {
    auto g = triangle();
    const double eps = 0.3;
    auto est = approx_diag(g, eps, 1234);
    const double truth = 2.0 / 9.0;
    for (double v : est.values) {
        CHECK(v >= (1 - eps) * (1 - eps) * truth);
        CHECK(v <= (1 + eps) * (1 + eps) * truth);
    }
    CHECK(est.k == jl_dimension(3, eps));
}

TEST_CASE("approx_diag: kirchhoff field is definitional") {
    auto g = triangle();
    auto est = approx_diag(g, 0.4, 7);
    double trace = 0.0;
    for (double v : est.values) trace += v;
    CHECK(est.kirchhoff == 3.0 * trace);
}

TEST_CASE("approx_diag: determinism across thread counts") {
    auto g = lapdiag::parse_edge_list("0 1\n1 2\n2 3\n3 0\n0 2\n").graph;
    auto a = approx_diag(g, 0.4, 42, 1);
    auto b = approx_diag(g, 0.4, 42, 4);
    CHECK(a.values == b.values);
    CHECK(a.kirchhoff == b.kirchhoff);
}

TEST_CASE("approx_diag: nonnegative values, epsilon range enforced") {
    auto g = triangle();
    auto est = approx_diag(g, 0.5, 3);
    for (double v : est.values) CHECK(v >= 0.0);
    CHECK_THROWS_AS(approx_diag(g, 0.7, 3), std::domain_error);
    CHECK_THROWS_AS(approx_diag(g, 0.0, 3), std::domain_error);
}

TEST_CASE("approx_diag: disconnected graph rejected") {
    auto g = parse_edge_list("0 1\n2 3\n").graph;
    CHECK_THROWS_AS(approx_diag(g, 0.3, 1), std::domain_error);
}

TEST_CASE("approx_diag: uniform weight scaling divides the estimate") {
    auto base = parse_edge_list("0 1 1\n1 2 1\n2 3 1\n0 3 1\n").graph;
    const double c = 4.0;
    auto scaled = parse_edge_list("0 1 4\n1 2 4\n2 3 4\n0 3 4\n").graph;
    auto a = approx_diag(base, 0.3, 11);
    auto b = approx_diag(scaled, 0.3, 11);
    for (std::size_t u = 0; u < a.values.size(); ++u)
        CHECK(b.values[u] == doctest::Approx(a.values[u] / c).epsilon(1e-9));
}

TEST_CASE("approx_diag: sigma stays below epsilon") {
    auto g = parse_edge_list("0 1\n1 2\n2 3\n3 4\n4 0\n0 2\n1 3\n").graph;
    auto exact = lapdiag::exact_pseudoinverse_diag(g);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        auto est = approx_diag(g, 0.3, seed);
        auto rep = lapdiag::error_metrics(exact, est);
        CHECK(rep.sigma <= 0.3);
    }
}
