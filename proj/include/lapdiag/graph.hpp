#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lapdiag {

/// Immutable weighted undirected graph with compact node ids.
///
/// Edges are stored with u < v (the tail of the implicit incidence
/// orientation is always the smaller id). Adjacency is kept in a CSR
/// layout alongside the flat edge array, so both Laplacian and incidence
/// operator applications run in O(M + N).
class Graph {
public:
    struct Edge {
        std::uint32_t u;
        std::uint32_t v;
        double w;
    };

    /// Builds a graph from a compacted edge list. Throws std::invalid_argument
    /// on self-loops, duplicate edges, non-positive weights, or ids >= n.
    Graph(std::size_t node_count, std::vector<Edge> edges);

    std::size_t node_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<double>& strengths() const { return strengths_; }
    double w_min() const { return w_min_; }
    double w_max() const { return w_max_; }
    bool connected() const { return connected_; }

    /// CSR adjacency access (neighbor ids and weights for node i).
    std::span<const std::uint32_t> neighbors(std::uint32_t i) const {
        return {adj_node_.data() + adj_off_[i], adj_off_[i + 1] - adj_off_[i]};
    }
    std::span<const double> neighbor_weights(std::uint32_t i) const {
        return {adj_w_.data() + adj_off_[i], adj_off_[i + 1] - adj_off_[i]};
    }

    /// y = (S - A) x, edge-wise in O(M + N).
    std::vector<double> laplacian_matvec(std::span<const double> x) const;

    /// y_e = sqrt(w_e) (x_u - x_v) for each edge e = (u, v), u < v.
    std::vector<double> incidence_apply(std::span<const double> x) const;

    /// x = B^T W^{1/2} y; composed with incidence_apply this equals
    /// laplacian_matvec.
    std::vector<double> incidence_transpose_apply(std::span<const double> y) const;

    /// Induced subgraph on the largest connected component. Ties are broken
    /// towards the component containing the smallest node id. Node ids are
    /// recompacted preserving ascending order; returns the mapping from new
    /// ids to old ids in old_ids (optional).
    Graph largest_connected_component(std::vector<std::uint32_t>* old_ids = nullptr) const;

    /// Canonical edge-list text: edges sorted by (u, v), weights with
    /// 17 significant digits.
    std::string serialize() const;

    /// 64-bit hash of the canonical edge list.
    std::uint64_t fingerprint() const;

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> adj_off_;
    std::vector<std::uint32_t> adj_node_;
    std::vector<double> adj_w_;
    std::vector<double> strengths_;
    double w_min_ = 0.0;
    double w_max_ = 0.0;
    bool connected_ = false;
};

struct ParseOptions {
    std::vector<std::string> comment_prefixes{"#", "%"};
    bool weighted = true;  ///< when false, any third token is ignored
};

struct ParseResult {
    Graph graph;
    std::size_t duplicate_edges = 0;  ///< duplicates collapsed (first weight kept)
    std::size_t self_loops = 0;       ///< dropped, counted as warnings
};

/// Parses whitespace-separated "u v" or "u v w" lines. Node tokens may be
/// arbitrary strings; ids are compacted to 0..N-1 in first-appearance order.
/// Missing weights default to 1. Throws std::runtime_error with the line
/// number on malformed tokens, std::domain_error on w <= 0.
ParseResult parse_edge_list(std::istream& in, const ParseOptions& options = {});
ParseResult parse_edge_list(const std::string& text, const ParseOptions& options = {});

}  // namespace lapdiag
