#include "gatseg/volume.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

static_assert(std::endian::native == std::endian::little,
              "payloads are written as native little-endian");

namespace gatseg {

using nlohmann::json;

void atomic_write_file(const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

namespace {

std::string read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Splits "header\npayload" and parses the header line.
json split_header(const std::string& bytes, size_t& payload_off, const std::string& path) {
    size_t nl = bytes.find('\n');
    if (nl == std::string::npos) throw std::runtime_error("missing header line: " + path);
    payload_off = nl + 1;
    json h = json::parse(bytes.substr(0, nl), nullptr, false);
    if (h.is_discarded()) throw std::runtime_error("malformed header JSON: " + path);
    return h;
}

} // namespace

void write_volume(const std::string& path, const Volume& vol) {
    require(vol.modalities == kModalities, "write_volume: expected 4 modalities");
    json h;
    h["kind"] = "volume";
    h["shape"] = {vol.modalities, vol.dims[0], vol.dims[1], vol.dims[2]};
    h["spacing"] = {vol.spacing[0], vol.spacing[1], vol.spacing[2]};
    h["dtype"] = "f32";
    std::string bytes = h.dump();
    bytes.push_back('\n');
    size_t off = bytes.size();
    bytes.resize(off + vol.data.size() * sizeof(float));
    auto* out = reinterpret_cast<float*>(bytes.data() + off);
    for (size_t i = 0; i < vol.data.size(); ++i) out[i] = static_cast<float>(vol.data[i]);
    atomic_write_file(path, bytes);
}

Volume read_volume(const std::string& path) {
    const std::string bytes = read_all(path);
    size_t off = 0;
    json h = split_header(bytes, off, path);
    if (h.value("kind", "") != "volume") throw std::runtime_error("not a volume file: " + path);
    if (h.value("dtype", "") != "f32") throw std::runtime_error("unsupported dtype: " + path);
    auto shape = h.at("shape").get<std::vector<int64_t>>();
    if (shape.size() != 4) throw std::runtime_error("volume shape must be [M,D,H,W]: " + path);
    if (shape[0] != kModalities) throw std::runtime_error("expected 4 modalities: " + path);
    Volume vol(shape[0], {shape[1], shape[2], shape[3]});
    auto spacing = h.at("spacing").get<std::vector<double>>();
    if (spacing.size() != 3) throw std::runtime_error("spacing must have 3 entries: " + path);
    vol.spacing = {spacing[0], spacing[1], spacing[2]};
    const size_t need = vol.data.size() * sizeof(float);
    if (bytes.size() - off != need) throw std::runtime_error("payload size mismatch: " + path);
    const auto* in = reinterpret_cast<const float*>(bytes.data() + off);
    for (size_t i = 0; i < vol.data.size(); ++i) vol.data[i] = static_cast<double>(in[i]);
    return vol;
}

void write_labels(const std::string& path, const LabelVolume& lab) {
    json h;
    h["kind"] = "labels";
    h["shape"] = {lab.dims[0], lab.dims[1], lab.dims[2]};
    h["spacing"] = {lab.spacing[0], lab.spacing[1], lab.spacing[2]};
    h["dtype"] = "u8";
    std::string bytes = h.dump();
    bytes.push_back('\n');
    size_t off = bytes.size();
    bytes.resize(off + lab.labels.size());
    std::memcpy(bytes.data() + off, lab.labels.data(), lab.labels.size());
    atomic_write_file(path, bytes);
}

LabelVolume read_labels(const std::string& path) {
    const std::string bytes = read_all(path);
    size_t off = 0;
    json h = split_header(bytes, off, path);
    if (h.value("kind", "") != "labels") throw std::runtime_error("not a labels file: " + path);
    if (h.value("dtype", "") != "u8") throw std::runtime_error("unsupported dtype: " + path);
    auto shape = h.at("shape").get<std::vector<int64_t>>();
    if (shape.size() != 3) throw std::runtime_error("labels shape must be [D,H,W]: " + path);
    LabelVolume lab({shape[0], shape[1], shape[2]});
    auto spacing = h.at("spacing").get<std::vector<double>>();
    if (spacing.size() != 3) throw std::runtime_error("spacing must have 3 entries: " + path);
    lab.spacing = {spacing[0], spacing[1], spacing[2]};
    if (bytes.size() - off != lab.labels.size()) throw std::runtime_error("payload size mismatch: " + path);
    std::memcpy(lab.labels.data(), bytes.data() + off, lab.labels.size());
    for (uint8_t c : lab.labels)
        if (c >= kClasses) throw std::runtime_error("label out of range: " + path);
    return lab;
}

} // namespace gatseg
