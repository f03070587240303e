#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gatseg/efficiency.hpp"
#include "gatseg/gat.hpp"
#include "gatseg/phantom.hpp"
#include "gatseg/seghead.hpp"
#include "gatseg/serialize.hpp"

namespace gatseg {

struct TrainConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double weight_decay = 1e-4;
    int64_t epochs = 20;
    uint64_t seed = 42;
    bool cosine_decay = false;
    int64_t eval_every = 1;        // held-out evaluation period in epochs, 0 = off
    int64_t checkpoint_every = 0;  // epochs, 0 = off
};

/// Adam with decoupled weight decay: p <- (1 - wd) * p - lr * mhat / (sqrt(vhat) + eps).
/// The decay is applied independently of the learning rate.
struct AdamW {
    double lr, beta1, beta2, weight_decay;
    double eps = 1e-8;
    int64_t t = 0;
    std::vector<double> m, v;

    AdamW(double lr_, double b1, double b2, double wd)
        : lr(lr_), beta1(b1), beta2(b2), weight_decay(wd) {}

    void init(int64_t n) { m.assign(static_cast<size_t>(n), 0.0); v.assign(static_cast<size_t>(n), 0.0); }
    void step(const std::vector<ParamBlock>& params, const std::vector<ParamBlock>& grads,
              double lr_scale = 1.0);
};

struct StepRecord {
    int64_t step = 0;
    double l_seg = 0.0, l_kd = 0.0, l_total = 0.0, grad_norm = 0.0;
};

struct EpochEval {
    int64_t epoch = 0;
    double mean_foreground_dsc = 0.0;
    std::vector<SegReport> reports;  // one per held-out volume
};

struct TrainLog {
    std::vector<StepRecord> steps;
    std::vector<EpochEval> evals;
    void write_jsonl(const std::string& path) const;
};

/// One prepared training sample: normalized volume, labels, patch layout.
struct SamplePack {
    LabelVolume labels;
    PatchSet patches;
};

struct SuiteConfig {
    int64_t train_count = 8;
    int64_t heldout_count = 2;
    int64_t side = 64;
    uint64_t base_seed = 100;
    TumorSpec tumor;
};

struct PhantomSuite {
    std::vector<SamplePack> train;
    std::vector<SamplePack> heldout;
};

SamplePack prepare_sample(const Volume& vol, const LabelVolume& labels, int64_t patch_side);
PhantomSuite make_suite(const SuiteConfig& cfg, int64_t patch_side);

/// Invoked with the step index and the model state before the update;
/// used by tests to re-derive logged losses from parameter snapshots.
using StepObserver = std::function<void(int64_t step, const GatModel& model)>;

/// Minimizes the segmentation loss with AdamW, one volume (one graph) per
/// step, fixed data order, deterministic under (seed, config). Aborts on a
/// non-finite loss.
TrainLog train_teacher(GatModel& model, const PhantomSuite& suite, const TrainConfig& cfg,
                       const SegLossConfig& seg_cfg, const GraphConfig& graph_cfg,
                       const std::string& checkpoint_dir = "",
                       const StepObserver& observer = nullptr);

/// One tape-recording pass of the teacher over the training set; energies
/// accumulated per volume in dataset order, then pruned at `percent`.
std::pair<HeadEnergyReport, HeadMask> run_pruning_pass(const GatModel& teacher,
                                                       const PhantomSuite& suite,
                                                       const GraphConfig& graph_cfg,
                                                       double percent);

/// derive_student followed by distillation training against the frozen
/// teacher. Teacher and student share the teacher-embedded node features and
/// per-volume graphs; the student's GAT layers and classifier are trained.
std::pair<GatModel, TrainLog> distill_student(const GatModel& teacher, const HeadMask& mask,
                                              const PhantomSuite& suite, const TrainConfig& cfg,
                                              const DistillConfig& distill_cfg,
                                              const SegLossConfig& seg_cfg,
                                              const GraphConfig& graph_cfg,
                                              const StepObserver& observer = nullptr);

/// Full pipeline on one sample: embed, build graph, forward, losses, metrics.
/// With a teacher, the KD term is evaluated on shared features and graph.
SegReport evaluate(const GatModel& model, const SamplePack& pack, const SegLossConfig& seg_cfg,
                   const GraphConfig& graph_cfg, const GatModel* teacher = nullptr,
                   const DistillConfig* distill_cfg = nullptr);

/// Predicted label volume for one sample.
LabelVolume predict_labels(const GatModel& model, const SamplePack& pack,
                           const GraphConfig& graph_cfg);

// ---------------------------------------------------------------------------
// Efficiency profile
// ---------------------------------------------------------------------------

struct BenchResult {
    int64_t parameter_count = 0;
    int64_t embed_macs = 0;
    std::vector<int64_t> layer_macs;   // per GAT layer
    int64_t classifier_macs = 0;
    int64_t total_macs = 0;            // layers + classifier (graph reasoning path)
    int64_t gat_macs = 0;              // layers only
    double median_forward_seconds = 0.0;
    int64_t repeats = 0;
    int threads = 1;
};

/// Analytic parameter / multiply-accumulate counts plus measured wall time of
/// model_forward over warm repeats (median).
BenchResult benchmark(const GatModel& model, const Mat& features, const DualEdgeGraph& graph,
                      int64_t repeats, bool measure_time = true);

} // namespace gatseg
