#include "gatseg/phantom.hpp"

#include <cmath>

#include "gatseg/parallel.hpp"
#include "gatseg/rng.hpp"

namespace gatseg {

namespace {

void validate_spec(int64_t side, const TumorSpec& spec, int64_t patch_side) {
    require(side > 0 && patch_side > 0 && side % patch_side == 0,
            "generate_phantom: side must be a positive multiple of the patch side");
    require(spec.radii[0] > spec.radii[1] && spec.radii[1] > spec.radii[2] && spec.radii[2] > 0.0,
            "generate_phantom: radii must satisfy edema > core > enhancing > 0");
    for (double s : spec.axis_scale) require(s > 0.0, "generate_phantom: axis_scale must be positive");
    require(spec.noise_sigma >= 0.0, "generate_phantom: noise sigma must be >= 0");
}

} // namespace

std::array<double, 3> phantom_center(uint64_t seed, int64_t side, const TumorSpec& spec) {
    const double mid = (static_cast<double>(side) - 1.0) / 2.0;
    rng::Stream s(rng::mix(seed, 0xC0FFEEull));
    std::array<double, 3> c{};
    for (int a = 0; a < 3; ++a)
        c[a] = mid + s.uniform(-spec.center_range[a], spec.center_range[a]);
    return c;
}

std::pair<Volume, LabelVolume> generate_phantom(uint64_t seed, int64_t side, const TumorSpec& spec,
                                                int64_t patch_side) {
    validate_spec(side, spec, patch_side);
    const std::array<double, 3> c = phantom_center(seed, side, spec);

    Volume vol(kModalities, {side, side, side});
    LabelVolume lab({side, side, side});

    const int64_t voxels = side * side * side;

    // innermost shell containing the voxel wins: enhancing, then core, then edema
#pragma omp parallel for schedule(static) if (voxels > 4096)
    for (int64_t vi = 0; vi < voxels; ++vi) {
        const int64_t z = vi / (side * side);
        const int64_t y = (vi / side) % side;
        const int64_t x = vi % side;
        uint8_t cls = 0;
        for (int shell = 2; shell >= 0; --shell) {
            const double rz = spec.radii[shell] * spec.axis_scale[0];
            const double ry = spec.radii[shell] * spec.axis_scale[1];
            const double rx = spec.radii[shell] * spec.axis_scale[2];
            const double dz = (static_cast<double>(z) - c[0]) / rz;
            const double dy = (static_cast<double>(y) - c[1]) / ry;
            const double dx = (static_cast<double>(x) - c[2]) / rx;
            if (dz * dz + dy * dy + dx * dx <= 1.0) {
                cls = static_cast<uint8_t>(shell + 1);
                break;
            }
        }
        lab.labels[static_cast<size_t>(vi)] = cls;
    }

#pragma omp parallel for schedule(static) if (voxels > 4096)
    for (int64_t vi = 0; vi < voxels; ++vi) {
        const uint8_t cls = lab.labels[static_cast<size_t>(vi)];
        for (int64_t m = 0; m < kModalities; ++m) {
            double val = spec.class_means[static_cast<size_t>(m)][cls];
            if (spec.noise_sigma > 0.0)
                val += spec.noise_sigma * rng::gaussian_at(seed, static_cast<uint64_t>(m * voxels + vi));
            vol.data[static_cast<size_t>(m * voxels + vi)] = val;
        }
    }
    return {std::move(vol), std::move(lab)};
}

Volume znorm(const Volume& vol) {
    Volume out = vol;
    const int64_t n = vol.voxels();
    for (int64_t m = 0; m < vol.modalities; ++m) {
        const double* src = vol.data.data() + m * n;
        double* dst = out.data.data() + m * n;
        const double mean = par::det_sum(n, [&](int64_t i) { return src[i]; }) / static_cast<double>(n);
        const double var = par::det_sum(n, [&](int64_t i) {
                               const double d = src[i] - mean;
                               return d * d;
                           }) /
                           static_cast<double>(n);
        const double denom = std::sqrt(var + 1e-24);
#pragma omp parallel for schedule(static) if (n > 4096)
        for (int64_t i = 0; i < n; ++i) dst[i] = (src[i] - mean) / denom;
    }
    return out;
}

namespace {

std::array<int64_t, 3> cropped_dims(std::array<int64_t, 3> dims, int64_t multiple) {
    require(multiple > 0, "center_crop: multiple must be positive");
    std::array<int64_t, 3> nd{};
    for (int a = 0; a < 3; ++a) {
        nd[a] = (dims[a] / multiple) * multiple;
        require(nd[a] > 0, "center_crop: dimension smaller than the patch side");
    }
    return nd;
}

} // namespace

Volume center_crop(const Volume& vol, int64_t multiple) {
    const auto nd = cropped_dims(vol.dims, multiple);
    if (nd == vol.dims) return vol;
    Volume out(vol.modalities, nd);
    out.spacing = vol.spacing;
    std::array<int64_t, 3> start{};
    for (int a = 0; a < 3; ++a) start[a] = (vol.dims[a] - nd[a]) / 2;
    for (int64_t m = 0; m < vol.modalities; ++m)
        for (int64_t z = 0; z < nd[0]; ++z)
            for (int64_t y = 0; y < nd[1]; ++y)
                for (int64_t x = 0; x < nd[2]; ++x)
                    out.at(m, z, y, x) = vol.at(m, z + start[0], y + start[1], x + start[2]);
    return out;
}

LabelVolume center_crop(const LabelVolume& lab, int64_t multiple) {
    const auto nd = cropped_dims(lab.dims, multiple);
    if (nd == lab.dims) return lab;
    LabelVolume out(nd);
    out.spacing = lab.spacing;
    std::array<int64_t, 3> start{};
    for (int a = 0; a < 3; ++a) start[a] = (lab.dims[a] - nd[a]) / 2;
    for (int64_t z = 0; z < nd[0]; ++z)
        for (int64_t y = 0; y < nd[1]; ++y)
            for (int64_t x = 0; x < nd[2]; ++x)
                out.at(z, y, x) = lab.at(z + start[0], y + start[1], x + start[2]);
    return out;
}

} // namespace gatseg
