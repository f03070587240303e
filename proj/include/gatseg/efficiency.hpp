#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gatseg/core.hpp"
#include "gatseg/gat.hpp"

namespace gatseg {

/// Mean squared L2 norm of each head's post-activation node outputs,
/// accumulated over forward-pass tapes.
struct HeadEnergyReport {
    int64_t layer_count = 0;
    int64_t head_count = 0;
    int64_t sample_count = 0;         // nodes accumulated
    std::vector<double> energies;     // layer_count * head_count, means

    double energy(int64_t layer, int64_t head) const {
        return energies[static_cast<size_t>(layer * head_count + head)];
    }
};

/// Running sums behind a HeadEnergyReport. Per-tape sums are added in a fixed
/// order, so accumulating in chunks and merging equals a single pass exactly.
struct HeadEnergyAccumulator {
    int64_t layer_count = 0;
    int64_t head_count = 0;
    int64_t sample_count = 0;
    std::vector<double> sums;

    HeadEnergyAccumulator() = default;
    HeadEnergyAccumulator(int64_t layers, int64_t heads)
        : layer_count(layers), head_count(heads),
          sums(static_cast<size_t>(layers * heads), 0.0) {}

    void add_tape(const ModelTape& tape);
    void merge(const HeadEnergyAccumulator& other);
    HeadEnergyReport report() const;
};

struct DistillConfig {
    double temperature = 2.0;  // > 1
    double kd_weight = 0.5;    // >= 0
    int64_t epochs = 10;
};

/// Per layer, sort heads ascending by (energy, head index) and prune the
/// first floor(percent * H / 100). Requires 0 <= percent < 100.
HeadMask prune_heads(const HeadEnergyReport& report, double percent);

/// Mean over retained head outputs; with a full mask this is bitwise the
/// plain head average.
Mat masked_aggregate(std::span<const Mat> head_outputs, std::span<const uint8_t> retain);

/// Mean over nodes of KL(softmax(zT/tau) || softmax(zS/tau)); probabilities
/// floored at 1e-12 before the log. The teacher side is a constant.
double kd_loss(const Mat& teacher_logits, const Mat& student_logits, double tau);

/// d(kd_loss)/d(student_logits) with the teacher detached.
Mat kd_loss_grad(const Mat& teacher_logits, const Mat& student_logits, double tau);

double total_loss(double seg_loss, double kd, double lambda);

/// Student model containing only the retained heads per layer, parameters
/// copied from the teacher; embedder and classifier copied. Its forward
/// equals the teacher's masked forward exactly.
GatModel derive_student(const GatModel& teacher, const HeadMask& mask);

// JSON serialization ({layer, head, energy, retained} records)
void write_energy_json(const std::string& path, const HeadEnergyReport& report);
HeadEnergyReport read_energy_json(const std::string& path);
void write_mask_json(const std::string& path, const HeadMask& mask,
                     const HeadEnergyReport* energies = nullptr);
HeadMask read_mask_json(const std::string& path);

} // namespace gatseg
