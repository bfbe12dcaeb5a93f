#include "lapdiag/models.hpp"

#include <stdexcept>
#include <string>

namespace lapdiag {

namespace {

constexpr std::size_t kGeneratorNodeCap = 1u << 24;

void validate_label(const NodeLabel& label, int g) {
    if (label.empty() || label.front() != 0)
        throw std::domain_error("node label must start with level 0");
    for (std::size_t i = 1; i < label.size(); ++i)
        if (label[i] <= label[i - 1])
            throw std::domain_error("node label levels must be strictly increasing");
    if (label.back() > g) throw std::domain_error("node label level exceeds generation");
}

BigInt ipow(BigInt base, int exp) {
    BigInt r = 1;
    while (exp-- > 0) r *= base;
    return r;
}

void check_generator_size(const BigInt& n) {
    if (n > kGeneratorNodeCap)
        throw std::domain_error("generator: requested graph exceeds the node cap of " +
                                std::to_string(kGeneratorNodeCap));
}

}  // namespace

std::string LabeledGraph::serialize_labels() const {
    std::string out;
    for (std::size_t u = 0; u < labels.size(); ++u) {
        out += std::to_string(u);
        out += '\t';
        for (std::size_t i = 0; i < labels[u].size(); ++i) {
            if (i) out += ',';
            out += std::to_string(labels[u][i]);
        }
        out += '\n';
    }
    return out;
}

LabeledGraph koch_generate(int g) {
    if (g < 0) throw std::domain_error("koch_generate: g must be >= 0");
    check_generator_size(2 * ipow(4, g) + 1);

    std::vector<Graph::Edge> edges{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
    std::vector<NodeLabel> labels{{0}, {0}, {0}};
    std::vector<std::array<std::uint32_t, 3>> triangles{{0, 1, 2}};
    std::uint32_t next = 3;
    for (int t = 1; t <= g; ++t) {
        const std::size_t existing = triangles.size();
        for (std::size_t ti = 0; ti < existing; ++ti) {
            const auto tri = triangles[ti];
            for (auto c : tri) {
                const std::uint32_t a = next++, b = next++;
                NodeLabel child = labels[c];
                child.push_back(t);
                labels.push_back(child);
                labels.push_back(std::move(child));
                edges.push_back({c, a, 1.0});
                edges.push_back({c, b, 1.0});
                edges.push_back({a, b, 1.0});
                triangles.push_back({c, a, b});
            }
        }
    }
    return {Graph(next, std::move(edges)), Family::koch, g, 0, std::move(labels)};
}

LabeledGraph urt_generate(int g, int f) {
    if (g < 0) throw std::domain_error("urt_generate: g must be >= 0");
    if (f < 1) throw std::domain_error("urt_generate: f must be >= 1");
    check_generator_size(ipow(f + 1, g));

    std::vector<Graph::Edge> edges;
    std::vector<NodeLabel> labels{{0}};
    std::uint32_t next = 1;
    for (int t = 1; t <= g; ++t) {
        const std::uint32_t existing = next;
        for (std::uint32_t p = 0; p < existing; ++p) {
            for (int c = 0; c < f; ++c) {
                NodeLabel child = labels[p];
                child.push_back(t);
                labels.push_back(std::move(child));
                edges.push_back({p, next++, 1.0});
            }
        }
    }
    return {Graph(next, std::move(edges)), Family::urt, g, f, std::move(labels)};
}

LabeledGraph psfw_generate(int g) {
    if (g < 0) throw std::domain_error("psfw_generate: g must be >= 0");
    check_generator_size((ipow(3, g + 1) + 3) / 2);

    std::vector<Graph::Edge> edges{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
    std::vector<NodeLabel> labels{{0}, {0}, {0}};
    std::uint32_t next = 3;
    for (int t = 1; t <= g; ++t) {
        const std::size_t existing = edges.size();
        for (std::size_t e = 0; e < existing; ++e) {
            const auto [u, v, w] = edges[e];
            const std::uint32_t node = next++;
            labels.push_back({t});
            edges.push_back({u, node, 1.0});
            edges.push_back({v, node, 1.0});
        }
    }
    return {Graph(next, std::move(edges)), Family::psfw, g, 0, std::move(labels)};
}

BigInt koch_shortest_path_sum(const NodeLabel& label, int g) {
    if (g < 0) throw std::domain_error("koch: g must be >= 0");
    validate_label(label, g);
    const int n = int(label.size()) - 1;
    const BigInt p4g = ipow(4, g);
    BigInt d = (g + 2) * p4g + 2 * n * p4g;
    for (int k = 1; k <= n; ++k) d -= 2 * ipow(4, g - label[k]);
    return d;
}

BigRational koch_node_resistance(const NodeLabel& label, int g) {
    return BigRational(2 * koch_shortest_path_sum(label, g), 3);
}

BigRational koch_kirchhoff(int g) {
    if (g < 0) throw std::domain_error("koch_kirchhoff: g must be >= 0");
    return BigRational(ipow(2, 4 * g + 1) * (6 * g + 7) + ipow(4, g + 1), 9);
}

BigRational koch_diag_closed_form(const NodeLabel& label, int g) {
    if (g < 0) throw std::domain_error("koch: g must be >= 0");
    validate_label(label, g);
    const int n = int(label.size()) - 1;
    const BigInt p4g = ipow(4, g);
    const BigInt big_n = 2 * p4g + 1;
    BigInt level_term = 2 * n * p4g;
    for (int k = 1; k <= n; ++k) level_term -= 2 * ipow(4, g - label[k]);
    // first-term denominator 3 N_g (not 3 N_g^2); pinned against the oracle
    return BigRational(2 * level_term, 3 * big_n) +
           BigRational(ipow(2, 2 * g + 1) * (5 * p4g + 3 * g + 4), 9 * big_n * big_n);
}

BigRational urt_node_resistance(const NodeLabel& label, int g, int f) {
    if (g < 0 || f < 1) throw std::domain_error("urt: need g >= 0 and f >= 1");
    validate_label(label, g);
    const int n = int(label.size()) - 1;
    const BigInt fp1g = ipow(f + 1, g);
    // g f (f+1)^{g-1} + (f+1)^g n - 2 sum_k (f+1)^{g-i_k}
    BigRational r = g == 0 ? BigRational(0) : BigRational(BigInt(g) * f * ipow(f + 1, g - 1));
    r += BigRational(n * fp1g);
    for (int k = 1; k <= n; ++k) r -= 2 * BigRational(ipow(f + 1, g - label[k]));
    return r;
}

BigRational urt_kirchhoff(int g, int f) {
    if (g < 0 || f < 1) throw std::domain_error("urt_kirchhoff: need g >= 0 and f >= 1");
    if (g == 0) return 0;  // single node
    return BigRational((BigInt(f) * g - 1) * ipow(f + 1, 2 * g - 1) + ipow(f + 1, g - 1));
}

BigRational urt_diag_closed_form(const NodeLabel& label, int g, int f) {
    if (g < 0 || f < 1) throw std::domain_error("urt: need g >= 0 and f >= 1");
    validate_label(label, g);
    const int n = int(label.size()) - 1;
    BigRational d(n);
    for (int k = 1; k <= n; ++k) d -= BigRational(2, ipow(f + 1, label[k]));
    d += BigRational(1, f + 1);
    d -= BigRational(1, ipow(f + 1, g + 1));
    return d;
}

BigRational psfw_kirchhoff(int g) {
    if (g < 0) throw std::domain_error("psfw_kirchhoff: g must be >= 0");
    const BigInt p3 = ipow(3, g + 2);
    const BigInt p2 = ipow(2, g + 1);
    const BigInt num = 50 * ipow(3, 3 * g + 3) - 35 * ipow(3, 2 * g + 2) * p2 +
                       48 * ipow(3, 2 * g + 2) + 30 * p3 * p2 - 14 * p3 + 225 * p2;
    return BigRational(num, 112 * p3);
}

std::strong_ordering label_compare(const NodeLabel& a, const NodeLabel& b) {
    if (a.empty() || b.empty() || a.front() != 0 || b.front() != 0)
        throw std::domain_error("label_compare: labels must start with level 0");
    if (a.size() != b.size()) return a.size() <=> b.size();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] <=> b[i];
    return std::strong_ordering::equal;
}

}  // namespace lapdiag
