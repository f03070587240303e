#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gatseg/core.hpp"

namespace gatseg {

inline constexpr int64_t kModalities = 4;
inline constexpr int64_t kClasses = 4;

/// Multimodal intensity grid, indexed [modality][z][y][x].
struct Volume {
    int64_t modalities = 0;
    std::array<int64_t, 3> dims{0, 0, 0}; // (D, H, W)
    std::array<double, 3> spacing{1.0, 1.0, 1.0};
    std::vector<double> data;

    Volume() = default;
    Volume(int64_t m, std::array<int64_t, 3> d)
        : modalities(m), dims(d),
          data(static_cast<size_t>(m * d[0] * d[1] * d[2]), 0.0) {}

    int64_t voxels() const { return dims[0] * dims[1] * dims[2]; }
    int64_t index(int64_t m, int64_t z, int64_t y, int64_t x) const {
        return ((m * dims[0] + z) * dims[1] + y) * dims[2] + x;
    }
    double& at(int64_t m, int64_t z, int64_t y, int64_t x) { return data[static_cast<size_t>(index(m, z, y, x))]; }
    double at(int64_t m, int64_t z, int64_t y, int64_t x) const { return data[static_cast<size_t>(index(m, z, y, x))]; }
};

/// Exclusive per-voxel class labels, indexed [z][y][x].
/// 0 background, 1 edema, 2 non-enhancing core, 3 enhancing.
struct LabelVolume {
    std::array<int64_t, 3> dims{0, 0, 0};
    std::array<double, 3> spacing{1.0, 1.0, 1.0};
    std::vector<uint8_t> labels;

    LabelVolume() = default;
    explicit LabelVolume(std::array<int64_t, 3> d)
        : dims(d), labels(static_cast<size_t>(d[0] * d[1] * d[2]), 0) {}

    int64_t voxels() const { return dims[0] * dims[1] * dims[2]; }
    int64_t index(int64_t z, int64_t y, int64_t x) const {
        return (z * dims[1] + y) * dims[2] + x;
    }
    uint8_t& at(int64_t z, int64_t y, int64_t x) { return labels[static_cast<size_t>(index(z, y, x))]; }
    uint8_t at(int64_t z, int64_t y, int64_t x) const { return labels[static_cast<size_t>(index(z, y, x))]; }
};

// File format: one JSON header line {"kind","shape","spacing","dtype"}
// followed by a flat little-endian payload (f32 for volumes, u8 for labels).
void write_volume(const std::string& path, const Volume& vol);
Volume read_volume(const std::string& path);
void write_labels(const std::string& path, const LabelVolume& lab);
LabelVolume read_labels(const std::string& path);

/// Write bytes to a temp file in the target directory, then rename into place.
void atomic_write_file(const std::string& path, const std::string& bytes);

} // namespace gatseg
