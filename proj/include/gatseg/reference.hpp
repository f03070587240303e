#pragma once

// Serial reference implementations. These are straight-line, loop-per-edge
// re-implementations of the parallel kernels, kept as oracles for the test
// suites and as the serial side of the kernel benchmark. They share no code
// with the kernels they check.

#include <cstdint>
#include <span>
#include <vector>

#include "gatseg/core.hpp"
#include "gatseg/gat.hpp"
#include "gatseg/graph.hpp"
#include "gatseg/seghead.hpp"

namespace gatseg::ref {

/// O(N^2) kNN over centers (full sort, ties by lower index). Same contract as
/// spatial_knn_bruteforce / spatial_knn_grid.
std::vector<EdgePair> spatial_knn(const Mat& centers, int64_t k);

/// O(N^2) top-k by cosine similarity, directed, ties by lower index.
std::vector<EdgePair> semantic_topk(const Mat& features, int64_t k);

/// Dense edge-by-edge GAT layer: builds each neighborhood by scanning the
/// edge lists, evaluates the attention formula with an explicitly formed
/// concatenated vector, plain softmax, then messages, ReLU, head mean.
Mat gat_layer(const Mat& h, const std::vector<EdgePair>& spatial_edges,
              const std::vector<EdgePair>& semantic_edges, const GatLayer& layer,
              std::span<const uint8_t> retain = {});

/// O(|bP| * |bT|) pairwise surface-distance HD95 with the same boundary and
/// percentile conventions as hd95_metric.
double hd95(const Mask3& pred, const Mask3& truth, std::array<double, 3> spacing = {1.0, 1.0, 1.0});

} // namespace gatseg::ref
