#include "gatseg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace gatseg {

namespace {

// brute-force crossover; above this the uniform-grid bucket search takes over
constexpr int64_t kGridThreshold = 50000;

struct Cand {
    double d2;
    int32_t idx;
};

inline bool cand_less(const Cand& a, const Cand& b) {
    if (a.d2 != b.d2) return a.d2 < b.d2;
    return a.idx < b.idx;
}

inline double sq_dist3(const double* a, const double* b) {
    const double dz = a[0] - b[0];
    const double dy = a[1] - b[1];
    const double dx = a[2] - b[2];
    return dz * dz + dy * dy + dx * dx;
}

} // namespace

double cosine_sim(std::span<const double> u, std::span<const double> v) {
    require(u.size() == v.size(), "cosine_sim: length mismatch");
    double uv = 0.0, uu = 0.0, vv = 0.0;
    for (size_t i = 0; i < u.size(); ++i) {
        uv += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
    }
    const double nu = std::sqrt(uu), nv = std::sqrt(vv);
    if (nu < 1e-12 || nv < 1e-12) return 0.0;
    return uv / (nu * nv);
}

std::vector<EdgePair> spatial_knn_bruteforce(const Mat& centers, int64_t k) {
    const int64_t n = centers.rows;
    const int64_t kk = std::min(k, n - 1);
    std::vector<EdgePair> edges(static_cast<size_t>(n * std::max<int64_t>(kk, 0)));

#pragma omp parallel for schedule(static) if (n > 64)
    for (int64_t i = 0; i < n; ++i) {
        std::vector<Cand> cands;
        cands.reserve(static_cast<size_t>(n - 1));
        for (int64_t j = 0; j < n; ++j) {
            if (j == i) continue;
            cands.push_back({sq_dist3(centers.row(i), centers.row(j)), static_cast<int32_t>(j)});
        }
        std::partial_sort(cands.begin(), cands.begin() + kk, cands.end(), cand_less);
        for (int64_t r = 0; r < kk; ++r)
            edges[static_cast<size_t>(i * kk + r)] = {static_cast<int32_t>(i), cands[static_cast<size_t>(r)].idx};
    }
    return edges;
}

namespace {

// Uniform-grid bucket accelerator. Candidate rings expand until the closest
// possible unvisited cell cannot beat the current k-th (distance, index)
// candidate; ties at the k-th distance are all collected, so the index
// tie-break matches the brute-force result exactly.
struct BucketGrid {
    std::array<double, 3> lo{}, cell{};
    std::array<int64_t, 3> dims{};
    std::vector<std::vector<int32_t>> buckets;

    explicit BucketGrid(const Mat& centers) {
        const int64_t n = centers.rows;
        std::array<double, 3> hi{};
        for (int a = 0; a < 3; ++a) {
            lo[a] = centers(0, a);
            hi[a] = centers(0, a);
        }
        for (int64_t i = 1; i < n; ++i)
            for (int a = 0; a < 3; ++a) {
                lo[a] = std::min(lo[a], centers(i, a));
                hi[a] = std::max(hi[a], centers(i, a));
            }
        // ~1 point per cell on average
        const double target = std::cbrt(static_cast<double>(n));
        for (int a = 0; a < 3; ++a) {
            const double span = std::max(hi[a] - lo[a], 1e-9);
            dims[a] = std::max<int64_t>(1, static_cast<int64_t>(target));
            cell[a] = span / static_cast<double>(dims[a]) * (1.0 + 1e-12);
        }
        buckets.resize(static_cast<size_t>(dims[0] * dims[1] * dims[2]));
        for (int64_t i = 0; i < n; ++i)
            buckets[static_cast<size_t>(cell_of(centers.row(i)))].push_back(static_cast<int32_t>(i));
    }

    int64_t clampc(int64_t c, int a) const { return std::clamp<int64_t>(c, 0, dims[a] - 1); }
    int64_t cell_of(const double* p) const {
        int64_t cz = clampc(static_cast<int64_t>((p[0] - lo[0]) / cell[0]), 0);
        int64_t cy = clampc(static_cast<int64_t>((p[1] - lo[1]) / cell[1]), 1);
        int64_t cx = clampc(static_cast<int64_t>((p[2] - lo[2]) / cell[2]), 2);
        return (cz * dims[1] + cy) * dims[2] + cx;
    }

    // squared distance from point to a cell's bounding box
    double box_d2(const double* p, int64_t cz, int64_t cy, int64_t cx) const {
        const int64_t c3[3] = {cz, cy, cx};
        double d2 = 0.0;
        for (int a = 0; a < 3; ++a) {
            const double blo = lo[a] + static_cast<double>(c3[a]) * cell[a];
            const double bhi = blo + cell[a];
            double d = 0.0;
            if (p[a] < blo) d = blo - p[a];
            else if (p[a] > bhi) d = p[a] - bhi;
            d2 += d * d;
        }
        return d2;
    }
};

} // namespace

std::vector<EdgePair> spatial_knn_grid(const Mat& centers, int64_t k) {
    const int64_t n = centers.rows;
    const int64_t kk = std::min(k, n - 1);
    if (kk <= 0) return {};
    BucketGrid grid(centers);
    std::vector<EdgePair> edges(static_cast<size_t>(n * kk));

#pragma omp parallel for schedule(dynamic, 64) if (n > 64)
    for (int64_t i = 0; i < n; ++i) {
        const double* p = centers.row(i);
        const int64_t hz = grid.clampc(static_cast<int64_t>((p[0] - grid.lo[0]) / grid.cell[0]), 0);
        const int64_t hy = grid.clampc(static_cast<int64_t>((p[1] - grid.lo[1]) / grid.cell[1]), 1);
        const int64_t hx = grid.clampc(static_cast<int64_t>((p[2] - grid.lo[2]) / grid.cell[2]), 2);

        std::vector<Cand> cands;
        const int64_t max_ring = std::max({grid.dims[0], grid.dims[1], grid.dims[2]});
        for (int64_t ring = 0; ring <= max_ring; ++ring) {
            // once k candidates are known, stop when no cell in this ring can
            // contain a point at distance <= current k-th
            if (static_cast<int64_t>(cands.size()) >= kk) {
                std::nth_element(cands.begin(), cands.begin() + (kk - 1), cands.end(), cand_less);
                const double kth = cands[static_cast<size_t>(kk - 1)].d2;
                double ring_best = std::numeric_limits<double>::infinity();
                bool any = false;
                for (int64_t cz = hz - ring; cz <= hz + ring; ++cz)
                    for (int64_t cy = hy - ring; cy <= hy + ring; ++cy)
                        for (int64_t cx = hx - ring; cx <= hx + ring; ++cx) {
                            if (std::max({std::llabs(cz - hz), std::llabs(cy - hy), std::llabs(cx - hx)}) != ring)
                                continue;
                            if (cz < 0 || cy < 0 || cx < 0 || cz >= grid.dims[0] || cy >= grid.dims[1] || cx >= grid.dims[2])
                                continue;
                            any = true;
                            ring_best = std::min(ring_best, grid.box_d2(p, cz, cy, cx));
                        }
                if (!any) break;
                if (ring_best > kth) break;
            }
            for (int64_t cz = hz - ring; cz <= hz + ring; ++cz)
                for (int64_t cy = hy - ring; cy <= hy + ring; ++cy)
                    for (int64_t cx = hx - ring; cx <= hx + ring; ++cx) {
                        if (std::max({std::llabs(cz - hz), std::llabs(cy - hy), std::llabs(cx - hx)}) != ring)
                            continue;
                        if (cz < 0 || cy < 0 || cx < 0 || cz >= grid.dims[0] || cy >= grid.dims[1] || cx >= grid.dims[2])
                            continue;
                        for (int32_t j : grid.buckets[static_cast<size_t>((cz * grid.dims[1] + cy) * grid.dims[2] + cx)]) {
                            if (j == static_cast<int32_t>(i)) continue;
                            cands.push_back({sq_dist3(p, centers.row(j)), j});
                        }
                    }
        }
        std::partial_sort(cands.begin(), cands.begin() + kk, cands.end(), cand_less);
        for (int64_t r = 0; r < kk; ++r)
            edges[static_cast<size_t>(i * kk + r)] = {static_cast<int32_t>(i), cands[static_cast<size_t>(r)].idx};
    }
    return edges;
}

std::vector<EdgePair> build_spatial_edges(const Mat& centers, int64_t k_spatial) {
    require(centers.rows >= 1, "build_spatial_edges: need at least one node");
    require(centers.cols == 3, "build_spatial_edges: centers must be N x 3");
    require(k_spatial >= 1, "build_spatial_edges: k must be >= 1");
    for (double c : centers.v) require(std::isfinite(c), "build_spatial_edges: non-finite center");

    const int64_t n = centers.rows;
    std::vector<EdgePair> knn = (n <= kGridThreshold) ? spatial_knn_bruteforce(centers, k_spatial)
                                                      : spatial_knn_grid(centers, k_spatial);
    std::vector<EdgePair> edges;
    edges.reserve(knn.size() * 2 + static_cast<size_t>(n));
    for (auto [i, j] : knn) {
        edges.emplace_back(i, j);
        edges.emplace_back(j, i);  // union-symmetrize
    }
    for (int64_t i = 0; i < n; ++i)
        edges.emplace_back(static_cast<int32_t>(i), static_cast<int32_t>(i));
    return edges;
}

std::vector<EdgePair> build_semantic_edges(const Mat& features, int64_t k_semantic) {
    require(features.rows >= 1, "build_semantic_edges: need at least one node");
    require(k_semantic >= 1, "build_semantic_edges: k must be >= 1");
    const int64_t n = features.rows;
    const int64_t kk = std::min(k_semantic, n - 1);
    if (kk <= 0) return {};
    std::vector<EdgePair> edges(static_cast<size_t>(n * kk));

#pragma omp parallel for schedule(static) if (n > 64)
    for (int64_t i = 0; i < n; ++i) {
        std::vector<Cand> cands;
        cands.reserve(static_cast<size_t>(n - 1));
        for (int64_t j = 0; j < n; ++j) {
            if (j == i) continue;
            // negate so cand_less orders by descending similarity, then index
            cands.push_back({-cosine_sim(features.row_span(i), features.row_span(j)),
                             static_cast<int32_t>(j)});
        }
        std::partial_sort(cands.begin(), cands.begin() + kk, cands.end(), cand_less);
        for (int64_t r = 0; r < kk; ++r)
            edges[static_cast<size_t>(i * kk + r)] = {static_cast<int32_t>(i), cands[static_cast<size_t>(r)].idx};
    }
    return edges;
}

namespace {

TypedAdj make_csr(const std::vector<EdgePair>& edges, int64_t n, const char* what) {
    for (auto [i, j] : edges)
        require(i >= 0 && j >= 0 && i < n && j < n, std::string(what) + ": edge index out of range");

    std::vector<std::vector<int32_t>> rows(static_cast<size_t>(n));
    for (auto [i, j] : edges) rows[static_cast<size_t>(i)].push_back(j);

    TypedAdj adj;
    adj.offsets.assign(static_cast<size_t>(n + 1), 0);
    for (int64_t i = 0; i < n; ++i) {
        auto& r = rows[static_cast<size_t>(i)];
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        adj.offsets[static_cast<size_t>(i + 1)] = adj.offsets[static_cast<size_t>(i)] + static_cast<int64_t>(r.size());
    }
    adj.nbrs.resize(static_cast<size_t>(adj.offsets[static_cast<size_t>(n)]));
    for (int64_t i = 0; i < n; ++i)
        std::copy(rows[static_cast<size_t>(i)].begin(), rows[static_cast<size_t>(i)].end(),
                  adj.nbrs.begin() + adj.offsets[static_cast<size_t>(i)]);

    // transpose with edge-index bookkeeping for the backward gather
    std::vector<int64_t> indeg(static_cast<size_t>(n), 0);
    for (int32_t j : adj.nbrs) ++indeg[static_cast<size_t>(j)];
    adj.t_offsets.assign(static_cast<size_t>(n + 1), 0);
    for (int64_t j = 0; j < n; ++j)
        adj.t_offsets[static_cast<size_t>(j + 1)] = adj.t_offsets[static_cast<size_t>(j)] + indeg[static_cast<size_t>(j)];
    adj.t_nodes.resize(adj.nbrs.size());
    adj.t_edges.resize(adj.nbrs.size());
    std::vector<int64_t> cursor(adj.t_offsets.begin(), adj.t_offsets.end() - 1);
    for (int64_t i = 0; i < n; ++i)
        for (int64_t e = adj.offsets[static_cast<size_t>(i)]; e < adj.offsets[static_cast<size_t>(i + 1)]; ++e) {
            const int32_t j = adj.nbrs[static_cast<size_t>(e)];
            const int64_t slot = cursor[static_cast<size_t>(j)]++;
            adj.t_nodes[static_cast<size_t>(slot)] = static_cast<int32_t>(i);
            adj.t_edges[static_cast<size_t>(slot)] = e;
        }
    return adj;
}

} // namespace

DualEdgeGraph assemble_graph(const std::vector<EdgePair>& spatial_edges,
                             const std::vector<EdgePair>& semantic_edges, int64_t node_count) {
    require(node_count >= 1, "assemble_graph: node count must be >= 1");
    DualEdgeGraph g;
    g.node_count = node_count;
    g.spatial = make_csr(spatial_edges, node_count, "assemble_graph(spatial)");
    g.semantic = make_csr(semantic_edges, node_count, "assemble_graph(semantic)");
    return g;
}

DualEdgeGraph build_graph(const Mat& centers, const Mat& features, const GraphConfig& cfg) {
    require(centers.rows == features.rows, "build_graph: centers/features node count mismatch");
    return assemble_graph(build_spatial_edges(centers, cfg.k_spatial),
                          build_semantic_edges(features, cfg.k_semantic), centers.rows);
}

} // namespace gatseg
