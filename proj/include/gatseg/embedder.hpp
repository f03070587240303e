#pragma once

#include <cstdint>
#include <vector>

#include "gatseg/core.hpp"
#include "gatseg/patches.hpp"

namespace gatseg {

/// Learned linear patch embedder: feature = projection * patch + bias
/// + pos_scale * posenc(center).
struct EmbedderParams {
    Mat projection;            // d x (M * s^3)
    std::vector<double> bias;  // d
    double pos_scale = 1.0;
};

struct EmbedderGrads {
    Mat projection;
    std::vector<double> bias;
    double pos_scale = 0.0;
};

/// Sinusoidal encoding of normalized patch-center coordinates.
/// Feature f uses axis f%3, frequency band f/6, and sin for (f/3)%2 == 0,
/// cos otherwise; angle = (center[axis] / extent[axis]) * pi * 2^band.
Mat posenc_matrix(const PatchSet& ps, int64_t dim);

Mat embed_patches(const PatchSet& ps, const EmbedderParams& params);

/// Reverse-mode gradients of embed_patches given d(loss)/d(features).
EmbedderGrads embed_backward(const PatchSet& ps, const EmbedderParams& params, const Mat& d_features);

} // namespace gatseg
