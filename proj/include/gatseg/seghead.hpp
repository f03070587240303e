#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gatseg/core.hpp"
#include "gatseg/patches.hpp"
#include "gatseg/volume.hpp"

namespace gatseg {

/// Per-class voxel grid, indexed [class][z][y][x].
struct VoxelLogits {
    int64_t classes = 0;
    std::array<int64_t, 3> dims{0, 0, 0};
    std::vector<double> v;

    VoxelLogits() = default;
    VoxelLogits(int64_t c, std::array<int64_t, 3> d)
        : classes(c), dims(d), v(static_cast<size_t>(c * d[0] * d[1] * d[2]), 0.0) {}

    int64_t voxels() const { return dims[0] * dims[1] * dims[2]; }
    double& at(int64_t c, int64_t vox) { return v[static_cast<size_t>(c * voxels() + vox)]; }
    double at(int64_t c, int64_t vox) const { return v[static_cast<size_t>(c * voxels() + vox)]; }
};

struct SegLossConfig {
    double dice_weight = 1.0;
    double ce_weight = 1.0;
    double smooth = 1e-5;
};

struct RegionScores {
    double et = 0.0, tc = 0.0, wt = 0.0;
    double mean() const { return (et + tc + wt) / 3.0; }
};

struct SegReport {
    RegionScores dsc;
    RegionScores hd95;
    double dice = 0.0, ce = 0.0, kd = 0.0, total = 0.0;
};

/// Broadcast each node's logit vector to every voxel of its patch.
VoxelLogits inverse_patch_map(const Mat& node_logits, const PatchSet& layout);

/// Adjoint of inverse_patch_map: per-patch sums of voxel gradients.
Mat gather_patch_grads(const VoxelLogits& voxel_grads, const PatchSet& layout);

/// Max-shifted per-voxel softmax.
VoxelLogits voxel_softmax(const VoxelLogits& logits);

/// Soft Dice averaged over foreground classes (background excluded);
/// per-class term 1 - (2*sum(p*y) + eps) / (sum(p) + sum(y) + eps).
double dice_loss(const VoxelLogits& probs, const LabelVolume& labels, double smooth);

/// Mean over voxels of -ln p[label], probabilities floored at 1e-12.
double ce_loss(const VoxelLogits& probs, const LabelVolume& labels);

double seg_loss(const VoxelLogits& probs, const LabelVolume& labels, const SegLossConfig& cfg);

/// Gradient of seg_loss with respect to the voxel logits (through softmax).
VoxelLogits seg_loss_grad(const VoxelLogits& probs, const LabelVolume& labels,
                          const SegLossConfig& cfg);

LabelVolume argmax_labels(const VoxelLogits& logits, std::array<double, 3> spacing = {1.0, 1.0, 1.0});

/// Binary mask over a voxel grid.
struct Mask3 {
    std::array<int64_t, 3> dims{0, 0, 0};
    std::vector<uint8_t> m;
};

/// Nested evaluation regions from exclusive labels.
enum class Region { et, tc, wt };
Mask3 region_mask(const LabelVolume& labels, Region r);

/// 2|P&T| / (|P|+|T|); both empty -> 1.
double dsc_metric(const Mask3& pred, const Mask3& truth);

/// Symmetric 95th-percentile surface distance. Boundary voxel = mask voxel
/// with a face-adjacent non-mask or out-of-volume neighbor; the percentile
/// interpolates linearly between order statistics of the pooled directed
/// distances. Both empty -> 0; exactly one empty -> volume diagonal.
double hd95_metric(const Mask3& pred, const Mask3& truth, std::array<double, 3> spacing = {1.0, 1.0, 1.0});

/// DSC and HD95 for ET / TC / WT (losses are filled in by the caller).
SegReport evaluate_regions(const LabelVolume& pred, const LabelVolume& truth);

} // namespace gatseg
