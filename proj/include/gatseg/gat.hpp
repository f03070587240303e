#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gatseg/core.hpp"
#include "gatseg/embedder.hpp"
#include "gatseg/graph.hpp"

namespace gatseg {

/// One attention head: separate weight matrix and attention vector per edge
/// type, indexed by EdgeType.
struct GatHeadParams {
    Mat W[2];                  // d_out x d_in each
    std::vector<double> a[2];  // 2 * d_out each; first half pairs with the
                               // attending node, second half with the neighbor
    double leaky_slope = 0.2;
};

struct GatLayer {
    int64_t in_dim = 0;
    int64_t out_dim = 0;
    std::vector<GatHeadParams> heads;
};

struct ClassifierParams {
    Mat W;                     // classes x d
    std::vector<double> b;     // classes
};

struct ModelConfig {
    int64_t layers = 2;
    int64_t heads = 4;
    int64_t embed_dim = 32;
    int64_t hidden_dim = 32;
    int64_t classes = 4;
    int64_t patch_side = 8;
    int64_t modalities = 4;
    double leaky_slope = 0.2;

    int64_t patch_input() const { return modalities * patch_side * patch_side * patch_side; }
    void validate() const;
};

struct GatModel {
    ModelConfig cfg;
    uint64_t init_seed = 0;
    EmbedderParams embedder;
    std::vector<GatLayer> layers;
    ClassifierParams classifier;
};

/// Per-(layer, head) retention flags. At least one head per layer.
struct HeadMask {
    int64_t layer_count = 0;
    int64_t head_count = 0;           // head count of the originating model
    std::vector<uint8_t> retain;      // layer_count * head_count

    static HeadMask full(int64_t layers, int64_t heads);
    bool retained(int64_t layer, int64_t head) const { return retain[static_cast<size_t>(layer * head_count + head)] != 0; }
    int64_t retained_in_layer(int64_t layer) const;
    void validate() const;
};

/// Seeded Glorot-uniform initialization (matrices and attention vectors);
/// biases start at zero, positional scale at one.
GatModel init_model(const ModelConfig& cfg, uint64_t seed);

// ---------------------------------------------------------------------------
// Forward / backward
// ---------------------------------------------------------------------------

struct HeadTape {
    bool active = true;
    Mat proj[2];                    // N x d_out per edge type
    std::vector<double> raw[2];     // pre-LeakyReLU logit per CSR edge
    std::vector<double> alpha[2];   // attention coefficient per CSR edge
    Mat head_out;                   // N x d_out, post-ReLU
};

struct LayerTape {
    Mat input;                      // N x d_in
    int64_t retained = 0;
    std::vector<HeadTape> heads;
};

struct ModelTape {
    const DualEdgeGraph* graph = nullptr;
    std::vector<LayerTape> layers;
    Mat final_hidden;               // classifier input
};

/// Unnormalized attention logit for a single (attending, neighbor) pair.
double attention_logit(std::span<const double> h_i, std::span<const double> h_j,
                       const GatHeadParams& head, EdgeType t);

/// Max-shifted softmax over one neighborhood's logits.
std::vector<double> normalize_attention(std::span<const double> logits);

/// One GAT layer: per head, per edge type, softmax-normalized attention over
/// the type's neighborhood, messages summed over both types, ReLU, then the
/// mean over retained heads. `retain` empty means all heads.
Mat layer_forward(const Mat& h, const DualEdgeGraph& graph, const GatLayer& layer,
                  std::span<const uint8_t> retain = {}, LayerTape* tape = nullptr);

/// Layer stack followed by the affine classifier. `features` are the embedded
/// node features. With zero layers the classifier applies directly.
Mat model_forward(const Mat& features, const DualEdgeGraph& graph, const GatModel& model,
                  const HeadMask* mask = nullptr, ModelTape* tape = nullptr);

struct HeadGrads {
    Mat dW[2];
    std::vector<double> da[2];
};

struct LayerGrads {
    std::vector<HeadGrads> heads;
};

struct ClassifierGrads {
    Mat dW;
    std::vector<double> db;
};

struct GatGradients {
    EmbedderGrads embedder;
    std::vector<LayerGrads> layers;
    ClassifierGrads classifier;
};

/// Zero-filled gradient buffers shaped like the model.
GatGradients alloc_gradients(const GatModel& model);

/// Exact reverse-mode gradients through classifier, ReLU, head averaging,
/// per-type attention softmax, LeakyReLU and the linear maps. Fills layer and
/// classifier gradients (masked heads stay zero) and returns
/// d(loss)/d(features); compose with embed_backward for embedder gradients.
Mat model_backward(const GatModel& model, const ModelTape& tape, const Mat& d_logits,
                   GatGradients& grads);

// ---------------------------------------------------------------------------
// Parameter registry
// ---------------------------------------------------------------------------
// Canonical parameter order (serialization, optimizer state, gradient
// flattening): embedder projection, embedder bias, positional scale, then per
// layer, per head: W_spatial, a_spatial, W_semantic, a_semantic, and finally
// classifier W, classifier b.

struct ParamBlock {
    double* data = nullptr;
    int64_t n = 0;
    std::string tag;
};

std::vector<ParamBlock> param_blocks(GatModel& model);
std::vector<ParamBlock> grad_blocks(GatGradients& grads);
int64_t param_count(const GatModel& model);

namespace detail {
/// Pairwise mean over head-output matrices, ascending head order. Shared by
/// layer_forward and masked_aggregate so the two agree bitwise.
Mat head_mean(const std::vector<const Mat*>& outs);
} // namespace detail

} // namespace gatseg
