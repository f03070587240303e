#pragma once

#include <cstdint>
#include <string>

#include "gatseg/gat.hpp"
#include "gatseg/graph.hpp"
#include "gatseg/seghead.hpp"
#include "gatseg/trainer.hpp"

namespace gatseg {

/// Resolved pipeline configuration. Parsing applies defaults for absent keys,
/// rejects unknown keys, and validates every invariant with an error naming
/// the offending key.
struct PipelineConfig {
    int64_t patch_side = 8;
    uint64_t init_seed = 1;
    GraphConfig graph;
    ModelConfig model;          // patch_side / modalities mirrored from above
    TrainConfig train;
    DistillConfig distill;
    SegLossConfig seg_loss;
    double prune_percent = 50.0;
    SuiteConfig data;
};

PipelineConfig default_config();
PipelineConfig parse_config(const std::string& json_text);
std::string config_to_json(const PipelineConfig& cfg);

} // namespace gatseg
