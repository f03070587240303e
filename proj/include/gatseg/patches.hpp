#pragma once

#include <array>
#include <cstdint>

#include "gatseg/core.hpp"
#include "gatseg/volume.hpp"

namespace gatseg {

/// Non-overlapping patch decomposition of a volume. Node order is z-major,
/// then y, then x over the patch grid; within a flattened patch the order is
/// [modality][local z][local y][local x].
struct PatchSet {
    int64_t node_count = 0;
    int64_t patch_side = 0;
    int64_t modalities = 0;
    std::array<int64_t, 3> grid_dims{0, 0, 0}; // patches per axis (z, y, x)
    std::array<int64_t, 3> vol_dims{0, 0, 0};
    std::array<double, 3> spacing{1.0, 1.0, 1.0};
    Mat patches;  // N x (M * s^3)
    Mat centers;  // N x 3, voxel units, axis order (z, y, x)

    int64_t patch_len() const { return modalities * patch_side * patch_side * patch_side; }
};

/// Rejects volumes whose spatial dims are not multiples of patch_side
/// (no implicit cropping here; see center_crop).
PatchSet extract_patches(const Volume& vol, int64_t patch_side);

/// Inverse of the patch layout: scatters the flattened patches back into a
/// volume. extract -> scatter reproduces the input bitwise.
Volume scatter_patches(const PatchSet& ps);

} // namespace gatseg
