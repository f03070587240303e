#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gatseg {

/// Dense row-major matrix of doubles. All model parameters, node features
/// and gradients use this layout.
struct Mat {
    int64_t rows = 0;
    int64_t cols = 0;
    std::vector<double> v;

    Mat() = default;
    Mat(int64_t r, int64_t c, double fill = 0.0)
        : rows(r), cols(c), v(static_cast<size_t>(r) * static_cast<size_t>(c), fill) {}

    double& operator()(int64_t r, int64_t c) { return v[static_cast<size_t>(r * cols + c)]; }
    double operator()(int64_t r, int64_t c) const { return v[static_cast<size_t>(r * cols + c)]; }

    double* row(int64_t r) { return v.data() + r * cols; }
    const double* row(int64_t r) const { return v.data() + r * cols; }
    std::span<const double> row_span(int64_t r) const { return {row(r), static_cast<size_t>(cols)}; }
    std::span<double> row_span(int64_t r) { return {row(r), static_cast<size_t>(cols)}; }

    int64_t size() const { return rows * cols; }
    void fill(double x) { std::fill(v.begin(), v.end(), x); }

    bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

inline double dot(const double* a, const double* b, int64_t n) {
    double s = 0.0;
    for (int64_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

} // namespace gatseg
