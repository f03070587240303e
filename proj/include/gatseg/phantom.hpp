#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "gatseg/volume.hpp"

namespace gatseg {

/// Geometry and appearance of the synthetic nested-ellipsoid tumor.
/// Shells share a center; semi-axis of shell k along axis a is
/// radii[k] * axis_scale[a]. The center is drawn uniformly from
/// volume-center +- center_range (per axis, seeded).
struct TumorSpec {
    std::array<double, 3> radii{28.0, 22.0, 16.0};      // edema > core > enhancing
    std::array<double, 3> axis_scale{1.0, 0.95, 0.9};   // per axis (z, y, x)
    std::array<double, 3> center_range{3.0, 3.0, 3.0};  // max |offset| in voxels
    double noise_sigma = 0.08;
    // class_means[modality][class], class order: bg, edema, core, enhancing
    std::array<std::array<double, 4>, 4> class_means{{
        {0.20, 0.45, 0.62, 0.80},  // T1
        {0.25, 0.40, 0.55, 1.10},  // T1Gd
        {0.30, 0.95, 0.70, 0.60},  // T2
        {0.25, 1.05, 0.85, 0.75},  // FLAIR
    }};
};

/// Ellipsoid center actually used for a given (seed, side, spec); exposed so
/// tests can evaluate the shells analytically.
std::array<double, 3> phantom_center(uint64_t seed, int64_t side, const TumorSpec& spec);

/// Seeded synthetic 4-modality phantom with exclusive labels. Identical seed
/// gives bitwise-identical output.
std::pair<Volume, LabelVolume> generate_phantom(uint64_t seed, int64_t side, const TumorSpec& spec,
                                                int64_t patch_side = 8);

/// Per-modality zero-mean unit-variance scaling (population variance,
/// epsilon-guarded denominator so constant modalities map to zero).
Volume znorm(const Volume& vol);

/// Crop each spatial dim down to the largest multiple of `multiple`, centered.
Volume center_crop(const Volume& vol, int64_t multiple);
LabelVolume center_crop(const LabelVolume& lab, int64_t multiple);

} // namespace gatseg
