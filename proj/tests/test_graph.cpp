#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "lapdiag/graph.hpp"

using lapdiag::Graph;
using lapdiag::parse_edge_list;

namespace {

Graph random_connected(std::mt19937_64& rng, std::size_t n, double extra_edge_prob,
                       double wlo = 0.5, double whi = 2.0) {
    std::uniform_real_distribution<double> wdist(wlo, whi);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<Graph::Edge> edges;
    for (std::uint32_t v = 1; v < n; ++v) {
        std::uniform_int_distribution<std::uint32_t> pick(0, v - 1);
        edges.push_back({pick(rng), v, wdist(rng)});
    }
    for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v = u + 1; v < n; ++v)
            if (u01(rng) < extra_edge_prob) {
                bool dup = false;
                for (const auto& e : edges)
                    if (e.u == std::min(u, v) && e.v == std::max(u, v)) dup = true;
                if (!dup) edges.push_back({u, v, wdist(rng)});
            }
    return Graph(n, std::move(edges));
}

}  // namespace

TEST_CASE("parse: triangle") {
    auto r = parse_edge_list("0 1\n1 2\n2 0\n");
    CHECK(r.graph.node_count() == 3);
    CHECK(r.graph.edge_count() == 3);
    for (const auto& e : r.graph.edges()) CHECK(e.w == 1.0);
}

TEST_CASE("parse: string ids and weights") {
    auto r = parse_edge_list("a b 2.5\nb c 0.5\n");
    CHECK(r.graph.node_count() == 3);
    CHECK(r.graph.edge_count() == 2);
    CHECK(r.graph.w_min() == 0.5);
    CHECK(r.graph.w_max() == 2.5);
}

TEST_CASE("parse: comments and duplicate collapse") {
    auto r = parse_edge_list("% comment\n0 1\n0 1\n");
    CHECK(r.graph.node_count() == 2);
    CHECK(r.graph.edge_count() == 1);
    CHECK(r.duplicate_edges == 1);
}

TEST_CASE("parse: duplicate keeps first weight") {
    auto r = parse_edge_list("0 1 3.0\n1 0 9.0\n");
    CHECK(r.graph.edge_count() == 1);
    CHECK(r.graph.edges()[0].w == 3.0);
}

TEST_CASE("parse: self-loop dropped with counter") {
    auto r = parse_edge_list("0 0\n0 1\n");
    CHECK(r.self_loops == 1);
    CHECK(r.graph.node_count() == 2);
    CHECK(r.graph.edge_count() == 1);
}

TEST_CASE("parse: canonical integer ids are preserved verbatim") {
    // Tokens 0..N-1 keep their numeric ids even when first appearances are
    // out of order, so serialized files re-parse without relabeling.
    auto r = parse_edge_list("0 2\n1 2\n");
    CHECK(r.graph.node_count() == 3);
    auto edges = r.graph.edges();
    CHECK(edges[0].u == 0);
    CHECK(edges[0].v == 2);
    CHECK(edges[1].u == 1);
    CHECK(edges[1].v == 2);

    // non-canonical integer tokens compact in first-appearance order
    auto s = parse_edge_list("7 5\n5 9\n");
    CHECK(s.graph.node_count() == 3);
    auto se = s.graph.edges();
    CHECK(se[0].u == 0);  // "7"
    CHECK(se[0].v == 1);  // "5"
    CHECK(se[1].u == 1);
    CHECK(se[1].v == 2);  // "9"
}

TEST_CASE("parse: errors") {
    CHECK_THROWS_AS(parse_edge_list("0 1 abc\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_edge_list("0 1 -2\n"), std::domain_error);
    CHECK_THROWS_AS(parse_edge_list("0 1 0\n"), std::domain_error);
    CHECK_THROWS_AS(parse_edge_list("lonely\n"), std::runtime_error);
}

TEST_CASE("lcc: tie broken towards smallest node id") {
    auto r = parse_edge_list("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n");
    std::vector<std::uint32_t> old_ids;
    Graph lcc = r.graph.largest_connected_component(&old_ids);
    CHECK(lcc.node_count() == 3);
    CHECK(old_ids == std::vector<std::uint32_t>{0, 1, 2});
}

TEST_CASE("lcc: connected graph is unchanged, idempotent") {
    auto g = parse_edge_list("0 1 2\n1 2 3\n").graph;
    Graph l1 = g.largest_connected_component();
    CHECK(l1.node_count() == g.node_count());
    CHECK(l1.serialize() == g.serialize());
    CHECK(l1.largest_connected_component().serialize() == l1.serialize());
}

TEST_CASE("lcc: picks the larger component") {
    auto g = parse_edge_list("0 1\n2 3\n3 4\n4 2\n").graph;
    Graph lcc = g.largest_connected_component();
    CHECK(lcc.node_count() == 3);
    CHECK(lcc.edge_count() == 3);
}

TEST_CASE("laplacian_matvec examples") {
    auto tri = parse_edge_list("0 1\n1 2\n2 0\n").graph;
    std::vector<double> ones{1, 1, 1};
    auto y = tri.laplacian_matvec(ones);
    for (double v : y) CHECK(v == doctest::Approx(0.0).epsilon(1e-15));

    std::vector<double> e0{1, 0, 0};
    auto y2 = tri.laplacian_matvec(e0);
    CHECK(y2[0] == 2.0);
    CHECK(y2[1] == -1.0);
    CHECK(y2[2] == -1.0);

    auto path = parse_edge_list("0 1 2\n1 2 3\n").graph;
    auto y3 = path.laplacian_matvec(std::vector<double>{1, 0, 0});
    CHECK(y3[0] == 2.0);
    CHECK(y3[1] == -2.0);
    CHECK(y3[2] == 0.0);

    CHECK_THROWS_AS(tri.laplacian_matvec(std::vector<double>{1, 2}), std::domain_error);
}

TEST_CASE("incidence operators") {
    auto tri = parse_edge_list("0 1\n1 2\n0 2\n").graph;
    auto zeros = tri.incidence_apply(std::vector<double>{1, 1, 1});
    for (double v : zeros) CHECK(v == 0.0);

    // tail = smaller id: entry is x_u - x_v for u < v
    auto ye = tri.incidence_apply(std::vector<double>{1, 0, 0});
    CHECK(ye[0] == 1.0);
    CHECK(ye[1] == 0.0);
    CHECK(ye[2] == 1.0);

    auto single = parse_edge_list("0 1 4\n").graph;
    auto s = single.incidence_apply(std::vector<double>{3, 1});
    CHECK(s[0] == doctest::Approx(4.0));

    auto back = single.incidence_transpose_apply(std::vector<double>{1.0});
    CHECK(back[0] == doctest::Approx(2.0));
    CHECK(back[1] == doctest::Approx(-2.0));

    // composition equals the Laplacian
    auto comp = tri.incidence_transpose_apply(tri.incidence_apply(std::vector<double>{1, 0, 0}));
    CHECK(comp[0] == doctest::Approx(2.0));
    CHECK(comp[1] == doctest::Approx(-1.0));
    CHECK(comp[2] == doctest::Approx(-1.0));

    CHECK_THROWS_AS(tri.incidence_transpose_apply(std::vector<double>{1.0}), std::domain_error);
}

TEST_CASE("operator invariants on random graphs") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = random_connected(rng, 30, 0.1);
        std::normal_distribution<double> nd;
        std::vector<double> x(g.node_count());
        for (auto& v : x) v = nd(rng);

        auto lx = g.laplacian_matvec(x);
        double sum = 0.0, xnorm = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sum += lx[i];
            xnorm += x[i] * x[i];
        }
        xnorm = std::sqrt(xnorm);
        CHECK(std::abs(sum) <= 1e-12 * xnorm * g.w_max() * double(g.node_count()));

        // x^T L x == ||W^{1/2} B x||^2
        double xtlx = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) xtlx += x[i] * lx[i];
        auto bx = g.incidence_apply(x);
        double bnorm2 = 0.0;
        for (double v : bx) bnorm2 += v * v;
        CHECK(xtlx == doctest::Approx(bnorm2).epsilon(1e-12));

        // strengths equal adjacency row sums
        std::vector<double> srec(g.node_count(), 0.0);
        for (const auto& e : g.edges()) {
            srec[e.u] += e.w;
            srec[e.v] += e.w;
        }
        for (std::size_t i = 0; i < srec.size(); ++i)
            CHECK(srec[i] == doctest::Approx(g.strengths()[i]).epsilon(1e-14));
    }
}

TEST_CASE("serialize round-trips") {
    std::mt19937_64 rng(7);
    Graph g = random_connected(rng, 25, 0.15);
    std::string text = g.serialize();
    Graph g2 = parse_edge_list(text).graph;
    CHECK(g2.serialize() == text);
    CHECK(g2.node_count() == g.node_count());
    CHECK(g2.fingerprint() == g.fingerprint());
}

TEST_CASE("graph constructor validation") {
    using E = Graph::Edge;
    CHECK_THROWS_AS(Graph(2, std::vector<E>{{0, 0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(2, std::vector<E>{{0, 1, 1.0}, {1, 0, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(2, std::vector<E>{{0, 1, -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(2, std::vector<E>{{0, 5, 1.0}}), std::invalid_argument);
}
