#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gatseg/core.hpp"

namespace gatseg {

enum class EdgeType : int { spatial = 0, semantic = 1 };

struct GraphConfig {
    int64_t k_spatial = 6;
    int64_t k_semantic = 8;
};

/// Directed edge (node, neighbor): `node` attends to `neighbor`.
using EdgePair = std::pair<int32_t, int32_t>;

/// CSR adjacency for one edge type, plus its transpose. The transpose keeps
/// the originating edge index so the backward pass can gather per-edge values
/// by source node without write races.
struct TypedAdj {
    std::vector<int64_t> offsets;  // N + 1
    std::vector<int32_t> nbrs;     // ascending within each row

    std::vector<int64_t> t_offsets; // N + 1, rows indexed by neighbor
    std::vector<int32_t> t_nodes;   // attending node of each transposed entry
    std::vector<int64_t> t_edges;   // index into nbrs of the original edge

    int64_t edge_count() const { return static_cast<int64_t>(nbrs.size()); }
    std::span<const int32_t> row(int64_t i) const {
        return {nbrs.data() + offsets[i], static_cast<size_t>(offsets[i + 1] - offsets[i])};
    }
};

/// Heterogeneous dual-edge graph over patch nodes: symmetric spatial kNN
/// adjacency with self-loops, and directed semantic top-k adjacency.
struct DualEdgeGraph {
    int64_t node_count = 0;
    TypedAdj spatial;
    TypedAdj semantic;

    const TypedAdj& adj(EdgeType t) const { return t == EdgeType::spatial ? spatial : semantic; }
};

/// u.v / (|u||v|); returns 0 if either norm is below 1e-12.
double cosine_sim(std::span<const double> u, std::span<const double> v);

/// kNN on Euclidean distance over centers (ties by lower index), then
/// union-symmetrized, plus a self-loop per node.
std::vector<EdgePair> build_spatial_edges(const Mat& centers, int64_t k_spatial);

/// Directed top-k by cosine similarity on features (ties by lower index).
/// No symmetrization, no self-loops.
std::vector<EdgePair> build_semantic_edges(const Mat& features, int64_t k_semantic);

/// CSR assembly with per-row sort + dedup; validates indices and invariants.
DualEdgeGraph assemble_graph(const std::vector<EdgePair>& spatial_edges,
                             const std::vector<EdgePair>& semantic_edges, int64_t node_count);

DualEdgeGraph build_graph(const Mat& centers, const Mat& features, const GraphConfig& cfg);

// kNN core shared by build_spatial_edges, exposed for the accelerator
// agreement tests. Both return each node's k nearest (pre-symmetrization).
std::vector<EdgePair> spatial_knn_bruteforce(const Mat& centers, int64_t k);
std::vector<EdgePair> spatial_knn_grid(const Mat& centers, int64_t k);

} // namespace gatseg
