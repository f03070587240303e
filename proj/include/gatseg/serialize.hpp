#pragma once

#include <string>

#include "gatseg/gat.hpp"

namespace gatseg {

// Weight file format: one JSON manifest line (architecture, per-layer head
// counts, init seed, parameter count) followed by the parameters as raw
// little-endian 64-bit floats in the canonical registry order. Round-trips
// are bitwise exact.
void save_model(const std::string& path, const GatModel& model);
GatModel load_model(const std::string& path);

} // namespace gatseg
