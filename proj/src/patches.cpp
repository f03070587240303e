#include "gatseg/patches.hpp"

#include <string>

namespace gatseg {

PatchSet extract_patches(const Volume& vol, int64_t patch_side) {
    require(patch_side > 0, "extract_patches: patch side must be positive");
    for (int a = 0; a < 3; ++a)
        require(vol.dims[a] % patch_side == 0,
                "extract_patches: dimension " + std::to_string(vol.dims[a]) +
                    " not divisible by patch side " + std::to_string(patch_side));

    PatchSet ps;
    ps.patch_side = patch_side;
    ps.modalities = vol.modalities;
    ps.vol_dims = vol.dims;
    ps.spacing = vol.spacing;
    for (int a = 0; a < 3; ++a) ps.grid_dims[a] = vol.dims[a] / patch_side;
    ps.node_count = ps.grid_dims[0] * ps.grid_dims[1] * ps.grid_dims[2];
    ps.patches = Mat(ps.node_count, ps.patch_len());
    ps.centers = Mat(ps.node_count, 3);

    const int64_t s = patch_side;
    const auto [gz, gy, gx] = ps.grid_dims;

#pragma omp parallel for schedule(static) if (ps.node_count > 8)
    for (int64_t node = 0; node < ps.node_count; ++node) {
        const int64_t pz = node / (gy * gx);
        const int64_t py = (node / gx) % gy;
        const int64_t px = node % gx;
        double* dst = ps.patches.row(node);
        int64_t w = 0;
        for (int64_t m = 0; m < vol.modalities; ++m)
            for (int64_t lz = 0; lz < s; ++lz)
                for (int64_t ly = 0; ly < s; ++ly)
                    for (int64_t lx = 0; lx < s; ++lx)
                        dst[w++] = vol.at(m, pz * s + lz, py * s + ly, px * s + lx);
        ps.centers(node, 0) = (static_cast<double>(pz) + 0.5) * static_cast<double>(s) - 0.5;
        ps.centers(node, 1) = (static_cast<double>(py) + 0.5) * static_cast<double>(s) - 0.5;
        ps.centers(node, 2) = (static_cast<double>(px) + 0.5) * static_cast<double>(s) - 0.5;
    }
    return ps;
}

Volume scatter_patches(const PatchSet& ps) {
    Volume vol(ps.modalities, ps.vol_dims);
    vol.spacing = ps.spacing;
    const int64_t s = ps.patch_side;
    const auto [gz, gy, gx] = ps.grid_dims;

#pragma omp parallel for schedule(static) if (ps.node_count > 8)
    for (int64_t node = 0; node < ps.node_count; ++node) {
        const int64_t pz = node / (gy * gx);
        const int64_t py = (node / gx) % gy;
        const int64_t px = node % gx;
        const double* src = ps.patches.row(node);
        int64_t r = 0;
        for (int64_t m = 0; m < ps.modalities; ++m)
            for (int64_t lz = 0; lz < s; ++lz)
                for (int64_t ly = 0; ly < s; ++ly)
                    for (int64_t lx = 0; lx < s; ++lx)
                        vol.at(m, pz * s + lz, py * s + ly, px * s + lx) = src[r++];
    }
    return vol;
}

} // namespace gatseg
