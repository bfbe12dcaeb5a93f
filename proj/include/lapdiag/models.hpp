#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <string>
#include <vector>

#include "lapdiag/graph.hpp"

namespace lapdiag {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Level sequence {0, i1, ..., in} identifying a node class in the Koch and
/// uniform-recursive-tree families (levels strictly increasing, last <= g).
using NodeLabel = std::vector<int>;

enum class Family { koch, urt, psfw };

struct LabeledGraph {
    Graph graph;
    Family family;
    int generation = 0;
    int fanout = 0;  ///< f for the urt family, otherwise 0
    std::vector<NodeLabel> labels;

    /// Sidecar label text: "node_id<TAB>comma-separated levels" per line.
    std::string serialize_labels() const;
};

/// Koch network K_g: every triangle spawns, per corner, a new triangle.
/// N = 2*4^g + 1, M = 3*4^g. Unit weights, creation-order node ids.
LabeledGraph koch_generate(int g);

/// Uniform recursive tree U_g: every node gains f children per iteration.
/// N = (f+1)^g. Unit weights.
LabeledGraph urt_generate(int g, int f);

/// Pseudofractal scale-free web F_g: every edge spawns a node joined to both
/// endpoints. N = (3^{g+1}+3)/2, M = 3^{g+1}. Labels carry the creation
/// level only.
LabeledGraph psfw_generate(int g);

/// Sum of shortest-path distances from a Koch node with the given label:
/// (g+2) 4^g + 2n 4^g - sum_k 2*4^{g-i_k}.
BigInt koch_shortest_path_sum(const NodeLabel& label, int g);

/// r_x = (2/3) d_x.
BigRational koch_node_resistance(const NodeLabel& label, int g);

/// Kirchhoff index (2^{4g+1}(6g+7) + 4^{g+1}) / 9.
BigRational koch_kirchhoff(int g);

/// Diagonal entry of L^+ for a Koch node, in the form consistent with
/// L+_xx = (R_x - tr L^+) / N. Note: the first-term denominator is 3*N_g,
/// not the 3*N_g^2 that appears in some statements of this formula; the
/// squared variant disagrees with the dense oracle for n >= 1.
BigRational koch_diag_closed_form(const NodeLabel& label, int g);

/// r_x for a uniform recursive tree node:
/// g f (f+1)^{g-1} + (f+1)^g [n - 2 sum_k (f+1)^{-i_k}].
BigRational urt_node_resistance(const NodeLabel& label, int g, int f);

/// Kirchhoff index (fg-1)(f+1)^{2g-1} + (f+1)^{g-1}; 0 for g = 0.
BigRational urt_kirchhoff(int g, int f);

/// Diagonal entry n - 2 sum_k (f+1)^{-i_k} + 1/(f+1) - (f+1)^{-(g+1)}.
BigRational urt_diag_closed_form(const NodeLabel& label, int g, int f);

/// Kirchhoff index of the pseudofractal scale-free web.
BigRational psfw_kirchhoff(int g);

/// Predicted order of the diagonal entries for two labels of the same family
/// and generation: longer label => greater; ties break lexicographically on
/// the first differing level, larger level => greater. (URT requires f >= 2.)
std::strong_ordering label_compare(const NodeLabel& a, const NodeLabel& b);

}  // namespace lapdiag
