#include "gatseg/embedder.hpp"

#include <cmath>
#include <numbers>

#include "gatseg/parallel.hpp"

namespace gatseg {

Mat posenc_matrix(const PatchSet& ps, int64_t dim) {
    Mat pe(ps.node_count, dim);
#pragma omp parallel for schedule(static) if (ps.node_count > 64)
    for (int64_t n = 0; n < ps.node_count; ++n) {
        double* row = pe.row(n);
        for (int64_t f = 0; f < dim; ++f) {
            const int axis = static_cast<int>(f % 3);
            const int64_t band = f / 6;
            const bool use_cos = ((f / 3) % 2) != 0;
            const double u = ps.centers(n, axis) / static_cast<double>(ps.vol_dims[axis]);
            const double angle = u * std::numbers::pi * std::pow(2.0, static_cast<double>(band));
            row[f] = use_cos ? std::cos(angle) : std::sin(angle);
        }
    }
    return pe;
}

Mat embed_patches(const PatchSet& ps, const EmbedderParams& params) {
    const int64_t d = params.projection.rows;
    require(params.projection.cols == ps.patch_len(),
            "embed_patches: projection columns do not match flattened patch length");
    require(static_cast<int64_t>(params.bias.size()) == d, "embed_patches: bias length mismatch");

    const Mat pe = posenc_matrix(ps, d);
    Mat feat(ps.node_count, d);
    const int64_t plen = ps.patch_len();
#pragma omp parallel for schedule(static) if (ps.node_count > 8)
    for (int64_t n = 0; n < ps.node_count; ++n) {
        const double* patch = ps.patches.row(n);
        double* out = feat.row(n);
        for (int64_t o = 0; o < d; ++o)
            out[o] = dot(params.projection.row(o), patch, plen) + params.bias[o] +
                     params.pos_scale * pe(n, o);
    }
    return feat;
}

EmbedderGrads embed_backward(const PatchSet& ps, const EmbedderParams& params,
                             const Mat& d_features) {
    const int64_t d = params.projection.rows;
    require(d_features.rows == ps.node_count && d_features.cols == d,
            "embed_backward: gradient shape mismatch");

    EmbedderGrads g;
    g.projection = Mat(d, params.projection.cols);
    g.bias.assign(static_cast<size_t>(d), 0.0);

    const Mat pe = posenc_matrix(ps, d);
    const int64_t plen = ps.patch_len();
    const int64_t n_nodes = ps.node_count;

    // one output row per thread iteration; node reduction runs in fixed order
#pragma omp parallel for schedule(static) if (d > 1)
    for (int64_t o = 0; o < d; ++o) {
        double* grow = g.projection.row(o);
        double bsum = 0.0;
        for (int64_t n = 0; n < n_nodes; ++n) {
            const double df = d_features(n, o);
            bsum += df;
            const double* patch = ps.patches.row(n);
            for (int64_t k = 0; k < plen; ++k) grow[k] += df * patch[k];
        }
        g.bias[static_cast<size_t>(o)] = bsum;
    }
    g.pos_scale = par::det_sum(n_nodes, [&](int64_t n) {
        return dot(d_features.row(n), pe.row(n), d);
    });
    return g;
}

} // namespace gatseg
