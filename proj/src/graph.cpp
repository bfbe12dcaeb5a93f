#include "lapdiag/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace lapdiag {

namespace {

std::string format_weight(double w) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", w);
    return buf;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

Graph::Graph(std::size_t node_count, std::vector<Edge> edges)
    : n_(node_count), edges_(std::move(edges)) {
    strengths_.assign(n_, 0.0);
    std::vector<std::size_t> deg(n_, 0);
    w_min_ = std::numeric_limits<double>::infinity();
    w_max_ = 0.0;
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges_.size() * 2);
    for (auto& e : edges_) {
        if (e.u == e.v) throw std::invalid_argument("self-loop");
        if (e.u >= n_ || e.v >= n_) throw std::invalid_argument("node id out of range");
        if (e.u > e.v) std::swap(e.u, e.v);
        if (!(e.w > 0.0)) throw std::invalid_argument("non-positive edge weight");
        if (!seen.insert((std::uint64_t(e.u) << 32) | e.v).second)
            throw std::invalid_argument("duplicate edge");
        strengths_[e.u] += e.w;
        strengths_[e.v] += e.w;
        ++deg[e.u];
        ++deg[e.v];
        w_min_ = std::min(w_min_, e.w);
        w_max_ = std::max(w_max_, e.w);
    }
    if (edges_.empty()) {
        w_min_ = w_max_ = 0.0;
    }

    adj_off_.assign(n_ + 1, 0);
    for (std::size_t i = 0; i < n_; ++i) adj_off_[i + 1] = adj_off_[i] + deg[i];
    adj_node_.resize(2 * edges_.size());
    adj_w_.resize(2 * edges_.size());
    std::vector<std::size_t> cursor(adj_off_.begin(), adj_off_.end() - 1);
    for (const auto& e : edges_) {
        adj_node_[cursor[e.u]] = e.v;
        adj_w_[cursor[e.u]++] = e.w;
        adj_node_[cursor[e.v]] = e.u;
        adj_w_[cursor[e.v]++] = e.w;
    }

    // connectivity via BFS from node 0
    if (n_ == 0) {
        connected_ = false;
    } else {
        std::vector<std::uint32_t> stack{0};
        std::vector<bool> visited(n_, false);
        visited[0] = true;
        std::size_t count = 1;
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            for (auto v : neighbors(u)) {
                if (!visited[v]) {
                    visited[v] = true;
                    ++count;
                    stack.push_back(v);
                }
            }
        }
        connected_ = (count == n_);
    }
}

std::vector<double> Graph::laplacian_matvec(std::span<const double> x) const {
    if (x.size() != n_) throw std::domain_error("laplacian_matvec: length mismatch");
    std::vector<double> y(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        double acc = strengths_[i] * x[i];
        const auto begin = adj_off_[i];
        const auto end = adj_off_[i + 1];
        for (std::size_t t = begin; t < end; ++t) acc -= adj_w_[t] * x[adj_node_[t]];
        y[i] = acc;
    }
    return y;
}

std::vector<double> Graph::incidence_apply(std::span<const double> x) const {
    if (x.size() != n_) throw std::domain_error("incidence_apply: length mismatch");
    std::vector<double> y(edges_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e)
        y[e] = std::sqrt(edges_[e].w) * (x[edges_[e].u] - x[edges_[e].v]);
    return y;
}

std::vector<double> Graph::incidence_transpose_apply(std::span<const double> y) const {
    if (y.size() != edges_.size())
        throw std::domain_error("incidence_transpose_apply: length mismatch");
    std::vector<double> x(n_, 0.0);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const double s = std::sqrt(edges_[e].w) * y[e];
        x[edges_[e].u] += s;
        x[edges_[e].v] -= s;
    }
    return x;
}

Graph Graph::largest_connected_component(std::vector<std::uint32_t>* old_ids) const {
    if (n_ == 0) throw std::domain_error("largest_connected_component: empty graph");
    std::vector<std::uint32_t> comp(n_, std::numeric_limits<std::uint32_t>::max());
    std::uint32_t n_comp = 0;
    std::vector<std::size_t> comp_size;
    std::vector<std::uint32_t> stack;
    for (std::uint32_t s = 0; s < n_; ++s) {
        if (comp[s] != std::numeric_limits<std::uint32_t>::max()) continue;
        comp[s] = n_comp;
        comp_size.push_back(1);
        stack.push_back(s);
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            for (auto v : neighbors(u)) {
                if (comp[v] == std::numeric_limits<std::uint32_t>::max()) {
                    comp[v] = n_comp;
                    ++comp_size[n_comp];
                    stack.push_back(v);
                }
            }
        }
        ++n_comp;
    }
    // Largest component; components are discovered in order of their smallest
    // node id, so the first maximum realizes the tie-break rule.
    std::uint32_t best = 0;
    for (std::uint32_t c = 1; c < n_comp; ++c)
        if (comp_size[c] > comp_size[best]) best = c;

    std::vector<std::uint32_t> new_id(n_, 0);
    std::vector<std::uint32_t> kept;
    for (std::uint32_t u = 0; u < n_; ++u) {
        if (comp[u] == best) {
            new_id[u] = static_cast<std::uint32_t>(kept.size());
            kept.push_back(u);
        }
    }
    std::vector<Edge> sub;
    sub.reserve(edges_.size());
    for (const auto& e : edges_)
        if (comp[e.u] == best) sub.push_back({new_id[e.u], new_id[e.v], e.w});
    if (old_ids) *old_ids = std::move(kept);
    return Graph(comp_size[best], std::move(sub));
}

std::string Graph::serialize() const {
    std::vector<Edge> sorted = edges_;
    std::sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    std::string out;
    for (const auto& e : sorted) {
        out += std::to_string(e.u);
        out += ' ';
        out += std::to_string(e.v);
        out += ' ';
        out += format_weight(e.w);
        out += '\n';
    }
    return out;
}

std::uint64_t Graph::fingerprint() const {
    const std::string canon = serialize();
    std::uint64_t h = splitmix64(n_ ^ 0x6c61706469616721ULL);
    for (unsigned char c : canon) h = splitmix64(h ^ c);
    return h;
}

namespace {

// Tokens that already form the canonical id range {0..N-1} are kept verbatim
// so that serialize -> parse round-trips to an identical graph and label
// sidecar files stay aligned; anything else is compacted in first-appearance
// order.
bool canonical_int_ids(const std::vector<std::string>& tokens_in_order) {
    std::vector<bool> seen(tokens_in_order.size(), false);
    for (const auto& t : tokens_in_order) {
        if (t.empty() || t.size() > 9) return false;
        std::uint64_t value = 0;
        for (char c : t) {
            if (c < '0' || c > '9') return false;
            value = value * 10 + std::uint64_t(c - '0');
        }
        if (t.size() > 1 && t[0] == '0') return false;
        if (value >= tokens_in_order.size() || seen[value]) return false;
        seen[value] = true;
    }
    return true;
}

}  // namespace

ParseResult parse_edge_list(std::istream& in, const ParseOptions& options) {
    std::unordered_map<std::string, std::uint32_t> ids;
    std::vector<std::string> token_order;
    struct RawEdge {
        std::uint32_t u, v;
        double w;
    };
    std::vector<RawEdge> raw;
    std::size_t self_loops = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv(line);
        while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) sv.remove_prefix(1);
        if (sv.empty()) continue;
        bool comment = false;
        for (const auto& p : options.comment_prefixes)
            if (sv.substr(0, p.size()) == p) comment = true;
        if (comment) continue;

        std::istringstream ls{std::string(sv)};
        std::string tu, tv, tw;
        if (!(ls >> tu >> tv))
            throw std::runtime_error("parse error at line " + std::to_string(lineno) +
                                     ": expected \"u v\" or \"u v w\"");
        double w = 1.0;
        if (options.weighted && (ls >> tw)) {
            std::size_t pos = 0;
            try {
                w = std::stod(tw, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != tw.size())
                throw std::runtime_error("parse error at line " + std::to_string(lineno) +
                                         ": non-numeric weight \"" + tw + "\"");
            if (!(w > 0.0))
                throw std::domain_error("line " + std::to_string(lineno) +
                                        ": edge weight must be positive");
        }
        auto intern = [&](const std::string& tok) {
            auto [it, inserted] = ids.try_emplace(tok, static_cast<std::uint32_t>(ids.size()));
            if (inserted) token_order.push_back(tok);
            return it->second;
        };
        const std::uint32_t u = intern(tu);
        const std::uint32_t v = intern(tv);
        if (u == v) {
            ++self_loops;
            continue;
        }
        raw.push_back({u, v, w});
    }

    std::vector<std::uint32_t> remap(token_order.size());
    if (canonical_int_ids(token_order)) {
        for (std::size_t i = 0; i < token_order.size(); ++i)
            remap[i] = static_cast<std::uint32_t>(std::stoul(token_order[i]));
    } else {
        for (std::size_t i = 0; i < token_order.size(); ++i)
            remap[i] = static_cast<std::uint32_t>(i);
    }

    std::vector<Graph::Edge> edges;
    edges.reserve(raw.size());
    std::unordered_set<std::uint64_t> seen_pairs;
    seen_pairs.reserve(raw.size() * 2);
    std::size_t duplicates = 0;
    for (const auto& e : raw) {
        const std::uint32_t u = remap[e.u];
        const std::uint32_t v = remap[e.v];
        const std::uint64_t key = (std::uint64_t(std::min(u, v)) << 32) | std::max(u, v);
        if (!seen_pairs.insert(key).second) {
            ++duplicates;
            continue;
        }
        edges.push_back({u, v, e.w});
    }
    return ParseResult{Graph(ids.size(), std::move(edges)), duplicates, self_loops};
}

ParseResult parse_edge_list(const std::string& text, const ParseOptions& options) {
    std::istringstream in(text);
    return parse_edge_list(in, options);
}

}  // namespace lapdiag
