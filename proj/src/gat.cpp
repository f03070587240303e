#include "gatseg/gat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gatseg/rng.hpp"

namespace gatseg {

void ModelConfig::validate() const {
    require(layers >= 0, "model.layers must be >= 0");
    require(heads >= 1, "model.heads must be >= 1");
    require(embed_dim > 0, "model.embed_dim must be > 0");
    require(hidden_dim > 0, "model.hidden_dim must be > 0");
    require(classes == kClasses, "model.classes must be 4");
    require(leaky_slope > 0.0 && leaky_slope < 1.0, "model.leaky_slope must be in (0, 1)");
    require(patch_side >= 1, "model.patch_side must be >= 1");
    require(modalities == kModalities, "model.modalities must be 4");
}

HeadMask HeadMask::full(int64_t layers, int64_t heads) {
    HeadMask m;
    m.layer_count = layers;
    m.head_count = heads;
    m.retain.assign(static_cast<size_t>(layers * heads), 1);
    return m;
}

int64_t HeadMask::retained_in_layer(int64_t layer) const {
    int64_t n = 0;
    for (int64_t h = 0; h < head_count; ++h)
        if (retained(layer, h)) ++n;
    return n;
}

void HeadMask::validate() const {
    require(static_cast<int64_t>(retain.size()) == layer_count * head_count,
            "mask: retain size mismatch");
    for (int64_t l = 0; l < layer_count; ++l)
        require(retained_in_layer(l) >= 1, "mask: every layer must retain at least one head");
}

namespace {

void glorot_fill(rng::Stream& s, double* data, int64_t n, int64_t fan_in, int64_t fan_out) {
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (int64_t i = 0; i < n; ++i) data[i] = s.uniform(-bound, bound);
}

} // namespace

GatModel init_model(const ModelConfig& cfg, uint64_t seed) {
    cfg.validate();
    GatModel m;
    m.cfg = cfg;
    m.init_seed = seed;
    rng::Stream s(rng::mix(seed, 0x6A7ull));

    const int64_t plen = cfg.patch_input();
    m.embedder.projection = Mat(cfg.embed_dim, plen);
    glorot_fill(s, m.embedder.projection.v.data(), m.embedder.projection.size(), plen, cfg.embed_dim);
    m.embedder.bias.assign(static_cast<size_t>(cfg.embed_dim), 0.0);
    m.embedder.pos_scale = 1.0;

    m.layers.resize(static_cast<size_t>(cfg.layers));
    for (int64_t l = 0; l < cfg.layers; ++l) {
        GatLayer& layer = m.layers[static_cast<size_t>(l)];
        layer.in_dim = (l == 0) ? cfg.embed_dim : cfg.hidden_dim;
        layer.out_dim = cfg.hidden_dim;
        layer.heads.resize(static_cast<size_t>(cfg.heads));
        for (auto& head : layer.heads) {
            head.leaky_slope = cfg.leaky_slope;
            for (int t = 0; t < 2; ++t) {
                head.W[t] = Mat(layer.out_dim, layer.in_dim);
                glorot_fill(s, head.W[t].v.data(), head.W[t].size(), layer.in_dim, layer.out_dim);
                head.a[t].assign(static_cast<size_t>(2 * layer.out_dim), 0.0);
                glorot_fill(s, head.a[t].data(), 2 * layer.out_dim, 2 * layer.out_dim, 1);
            }
        }
    }

    const int64_t cls_in = (cfg.layers == 0) ? cfg.embed_dim : cfg.hidden_dim;
    m.classifier.W = Mat(cfg.classes, cls_in);
    glorot_fill(s, m.classifier.W.v.data(), m.classifier.W.size(), cls_in, cfg.classes);
    m.classifier.b.assign(static_cast<size_t>(cfg.classes), 0.0);
    return m;
}

// ---------------------------------------------------------------------------
// Forward
// ---------------------------------------------------------------------------

double attention_logit(std::span<const double> h_i, std::span<const double> h_j,
                       const GatHeadParams& head, EdgeType t) {
    const Mat& W = head.W[static_cast<int>(t)];
    const auto& a = head.a[static_cast<int>(t)];
    require(static_cast<int64_t>(h_i.size()) == W.cols && static_cast<int64_t>(h_j.size()) == W.cols,
            "attention_logit: feature dimension mismatch");
    const int64_t dout = W.rows;
    double s_dst = 0.0, s_src = 0.0;
    for (int64_t o = 0; o < dout; ++o) {
        s_dst += a[static_cast<size_t>(o)] * dot(W.row(o), h_i.data(), W.cols);
        s_src += a[static_cast<size_t>(dout + o)] * dot(W.row(o), h_j.data(), W.cols);
    }
    const double raw = s_dst + s_src;
    return raw > 0.0 ? raw : head.leaky_slope * raw;
}

std::vector<double> normalize_attention(std::span<const double> logits) {
    require(!logits.empty(), "normalize_attention: empty neighborhood");
    double mx = logits[0];
    for (double e : logits) mx = std::max(mx, e);
    std::vector<double> out(logits.size());
    double denom = 0.0;
    for (size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - mx);
        denom += out[i];
    }
    for (double& a : out) a /= denom;
    return out;
}

namespace detail {

// Pairwise (tree) sum so that the mean over retained heads is exact for
// power-of-two retention counts; shared with masked_aggregate.
double tree_sum_at(const std::vector<const Mat*>& ms, size_t lo, size_t hi, size_t e) {
    if (hi - lo == 1) return ms[lo]->v[e];
    const size_t mid = lo + (hi - lo) / 2;
    return tree_sum_at(ms, lo, mid, e) + tree_sum_at(ms, mid, hi, e);
}

Mat head_mean(const std::vector<const Mat*>& outs) {
    const size_t H = outs.size();
    Mat out(outs[0]->rows, outs[0]->cols);
    const int64_t sz = out.size();
    const double inv = 1.0 / static_cast<double>(H);
#pragma omp parallel for schedule(static) if (sz > 4096)
    for (int64_t e = 0; e < sz; ++e)
        out.v[static_cast<size_t>(e)] = tree_sum_at(outs, 0, H, static_cast<size_t>(e)) * inv;
    return out;
}

} // namespace detail

namespace {

// One head, one edge type: projected features, per-edge raw logits and
// attention coefficients, messages accumulated into msg.
void head_type_forward(const Mat& h, const TypedAdj& adj, const GatHeadParams& head, int t,
                       Mat& proj, std::vector<double>& raw, std::vector<double>& alpha, Mat& msg) {
    const Mat& W = head.W[t];
    const auto& a = head.a[t];
    const int64_t n = h.rows, din = W.cols, dout = W.rows;
    const double slope = head.leaky_slope;

    proj = Mat(n, dout);
#pragma omp parallel for schedule(static) if (n > 32)
    for (int64_t i = 0; i < n; ++i) {
        const double* hi = h.row(i);
        double* p = proj.row(i);
        for (int64_t o = 0; o < dout; ++o) p[o] = dot(W.row(o), hi, din);
    }

    std::vector<double> s_dst(static_cast<size_t>(n)), s_src(static_cast<size_t>(n));
#pragma omp parallel for schedule(static) if (n > 64)
    for (int64_t i = 0; i < n; ++i) {
        s_dst[static_cast<size_t>(i)] = dot(a.data(), proj.row(i), dout);
        s_src[static_cast<size_t>(i)] = dot(a.data() + dout, proj.row(i), dout);
    }

    const int64_t ecount = adj.edge_count();
    raw.assign(static_cast<size_t>(ecount), 0.0);
    alpha.assign(static_cast<size_t>(ecount), 0.0);

#pragma omp parallel for schedule(static) if (n > 32)
    for (int64_t i = 0; i < n; ++i) {
        const int64_t lo = adj.offsets[static_cast<size_t>(i)];
        const int64_t hi = adj.offsets[static_cast<size_t>(i + 1)];
        if (lo == hi) continue;  // empty neighborhood: zero contribution
        double mx = -std::numeric_limits<double>::infinity();
        for (int64_t e = lo; e < hi; ++e) {
            const int32_t j = adj.nbrs[static_cast<size_t>(e)];
            const double r = s_dst[static_cast<size_t>(i)] + s_src[static_cast<size_t>(j)];
            raw[static_cast<size_t>(e)] = r;
            const double post = r > 0.0 ? r : slope * r;
            alpha[static_cast<size_t>(e)] = post;  // reused as post-activation buffer
            mx = std::max(mx, post);
        }
        double denom = 0.0;
        for (int64_t e = lo; e < hi; ++e) {
            const double w = std::exp(alpha[static_cast<size_t>(e)] - mx);
            alpha[static_cast<size_t>(e)] = w;
            denom += w;
        }
        double* m = msg.row(i);
        for (int64_t e = lo; e < hi; ++e) {
            alpha[static_cast<size_t>(e)] /= denom;
            const double* pj = proj.row(adj.nbrs[static_cast<size_t>(e)]);
            const double av = alpha[static_cast<size_t>(e)];
            for (int64_t o = 0; o < dout; ++o) m[o] += av * pj[o];
        }
    }
}

} // namespace

Mat layer_forward(const Mat& h, const DualEdgeGraph& graph, const GatLayer& layer,
                  std::span<const uint8_t> retain, LayerTape* tape) {
    const int64_t n = h.rows;
    require(graph.node_count == n, "layer_forward: graph/features node count mismatch");
    require(h.cols == layer.in_dim, "layer_forward: input dimension mismatch");
    const int64_t H = static_cast<int64_t>(layer.heads.size());
    require(H >= 1, "layer_forward: layer has no heads");
    if (!retain.empty())
        require(static_cast<int64_t>(retain.size()) == H, "layer_forward: retain flag count mismatch");

    if (tape) {
        tape->input = h;
        tape->heads.assign(static_cast<size_t>(H), HeadTape{});
    }

    std::vector<Mat> head_outs(static_cast<size_t>(H));
    std::vector<const Mat*> retained_ptrs;
    for (int64_t hd = 0; hd < H; ++hd) {
        const bool active = retain.empty() || retain[static_cast<size_t>(hd)] != 0;
        if (tape) tape->heads[static_cast<size_t>(hd)].active = active;
        if (!active) continue;

        const GatHeadParams& hp = layer.heads[static_cast<size_t>(hd)];
        Mat msg(n, layer.out_dim);
        Mat proj[2];
        std::vector<double> raw[2], alpha[2];
        for (int t = 0; t < 2; ++t) {
            const TypedAdj& adj = (t == 0) ? graph.spatial : graph.semantic;
            head_type_forward(h, adj, hp, t, proj[t], raw[t], alpha[t], msg);
        }
        Mat& out = head_outs[static_cast<size_t>(hd)];
        out = Mat(n, layer.out_dim);
        const int64_t sz = out.size();
#pragma omp parallel for schedule(static) if (sz > 4096)
        for (int64_t e = 0; e < sz; ++e)
            out.v[static_cast<size_t>(e)] = std::max(0.0, msg.v[static_cast<size_t>(e)]);

        if (tape) {
            HeadTape& ht = tape->heads[static_cast<size_t>(hd)];
            for (int t = 0; t < 2; ++t) {
                ht.proj[t] = std::move(proj[t]);
                ht.raw[t] = std::move(raw[t]);
                ht.alpha[t] = std::move(alpha[t]);
            }
            ht.head_out = out;
        }
        retained_ptrs.push_back(&head_outs[static_cast<size_t>(hd)]);
    }
    require(!retained_ptrs.empty(), "layer_forward: no retained heads");
    if (tape) tape->retained = static_cast<int64_t>(retained_ptrs.size());
    return detail::head_mean(retained_ptrs);
}

Mat model_forward(const Mat& features, const DualEdgeGraph& graph, const GatModel& model,
                  const HeadMask* mask, ModelTape* tape) {
    require(features.cols == model.cfg.embed_dim, "model_forward: feature dimension mismatch");
    require(graph.node_count == features.rows, "model_forward: node count mismatch");
    const int64_t L = static_cast<int64_t>(model.layers.size());
    if (mask) {
        mask->validate();
        require(mask->layer_count == L, "model_forward: mask layer count mismatch");
    }
    if (tape) {
        tape->graph = &graph;
        tape->layers.assign(static_cast<size_t>(L), LayerTape{});
    }

    Mat h = features;
    for (int64_t l = 0; l < L; ++l) {
        std::span<const uint8_t> retain;
        if (mask) {
            require(mask->head_count == static_cast<int64_t>(model.layers[static_cast<size_t>(l)].heads.size()),
                    "model_forward: mask head count mismatch");
            retain = {mask->retain.data() + l * mask->head_count, static_cast<size_t>(mask->head_count)};
        }
        h = layer_forward(h, graph, model.layers[static_cast<size_t>(l)], retain,
                          tape ? &tape->layers[static_cast<size_t>(l)] : nullptr);
    }
    if (tape) tape->final_hidden = h;

    const ClassifierParams& cls = model.classifier;
    require(cls.W.cols == h.cols, "model_forward: classifier input dimension mismatch");
    const int64_t n = h.rows, C = cls.W.rows;
    Mat logits(n, C);
#pragma omp parallel for schedule(static) if (n > 64)
    for (int64_t i = 0; i < n; ++i) {
        const double* hi = h.row(i);
        double* z = logits.row(i);
        for (int64_t c = 0; c < C; ++c) z[c] = dot(cls.W.row(c), hi, cls.W.cols) + cls.b[static_cast<size_t>(c)];
    }
    return logits;
}

// ---------------------------------------------------------------------------
// Backward
// ---------------------------------------------------------------------------

GatGradients alloc_gradients(const GatModel& model) {
    GatGradients g;
    g.embedder.projection = Mat(model.embedder.projection.rows, model.embedder.projection.cols);
    g.embedder.bias.assign(model.embedder.bias.size(), 0.0);
    g.embedder.pos_scale = 0.0;
    g.layers.resize(model.layers.size());
    for (size_t l = 0; l < model.layers.size(); ++l) {
        g.layers[l].heads.resize(model.layers[l].heads.size());
        for (size_t hd = 0; hd < model.layers[l].heads.size(); ++hd) {
            const GatHeadParams& hp = model.layers[l].heads[hd];
            for (int t = 0; t < 2; ++t) {
                g.layers[l].heads[hd].dW[t] = Mat(hp.W[t].rows, hp.W[t].cols);
                g.layers[l].heads[hd].da[t].assign(hp.a[t].size(), 0.0);
            }
        }
    }
    g.classifier.dW = Mat(model.classifier.W.rows, model.classifier.W.cols);
    g.classifier.db.assign(model.classifier.b.size(), 0.0);
    return g;
}

namespace {

// Backward of a single (head, type): fills dW, da and accumulates into dproj.
void head_type_backward(const TypedAdj& adj, const GatHeadParams& hp, int t, const Mat& input,
                        const HeadTape& ht, const Mat& gm, Mat& dW, std::vector<double>& da,
                        Mat& dh) {
    const Mat& proj = ht.proj[t];
    const auto& raw = ht.raw[t];
    const auto& alpha = ht.alpha[t];
    const int64_t n = input.rows, din = input.cols, dout = proj.cols;
    const int64_t ecount = adj.edge_count();
    const double slope = hp.leaky_slope;
    const double* a_dst = hp.a[t].data();
    const double* a_src = hp.a[t].data() + dout;

    // d(loss)/d(pre-LeakyReLU logit) per edge: attention softmax backward,
    // then the LeakyReLU gate
    std::vector<double> dpre(static_cast<size_t>(ecount), 0.0);
#pragma omp parallel for schedule(static) if (n > 32)
    for (int64_t i = 0; i < n; ++i) {
        const int64_t lo = adj.offsets[static_cast<size_t>(i)];
        const int64_t hi = adj.offsets[static_cast<size_t>(i + 1)];
        if (lo == hi) continue;
        const double* g = gm.row(i);
        double srow = 0.0;
        for (int64_t e = lo; e < hi; ++e) {
            const double dal = dot(g, proj.row(adj.nbrs[static_cast<size_t>(e)]), dout);
            dpre[static_cast<size_t>(e)] = dal;  // stash d(alpha) temporarily
            srow += alpha[static_cast<size_t>(e)] * dal;
        }
        for (int64_t e = lo; e < hi; ++e) {
            const double de = alpha[static_cast<size_t>(e)] * (dpre[static_cast<size_t>(e)] - srow);
            dpre[static_cast<size_t>(e)] = de * (raw[static_cast<size_t>(e)] > 0.0 ? 1.0 : slope);
        }
    }

    // attention-vector gradients: one output coordinate per parallel
    // iteration, edges visited in fixed CSR order
#pragma omp parallel for schedule(static) if (dout > 4)
    for (int64_t o = 0; o < dout; ++o) {
        double acc_dst = 0.0, acc_src = 0.0;
        for (int64_t i = 0; i < n; ++i) {
            const int64_t lo = adj.offsets[static_cast<size_t>(i)];
            const int64_t hi = adj.offsets[static_cast<size_t>(i + 1)];
            for (int64_t e = lo; e < hi; ++e) {
                acc_dst += dpre[static_cast<size_t>(e)] * proj(i, o);
                acc_src += dpre[static_cast<size_t>(e)] * proj(adj.nbrs[static_cast<size_t>(e)], o);
            }
        }
        da[static_cast<size_t>(o)] += acc_dst;
        da[static_cast<size_t>(dout + o)] += acc_src;
    }

    // gradient w.r.t. projected features
    Mat dproj(n, dout);
#pragma omp parallel for schedule(static) if (n > 32)
    for (int64_t i = 0; i < n; ++i) {
        const int64_t lo = adj.offsets[static_cast<size_t>(i)];
        const int64_t hi = adj.offsets[static_cast<size_t>(i + 1)];
        if (lo == hi) continue;
        double rowsum = 0.0;
        for (int64_t e = lo; e < hi; ++e) rowsum += dpre[static_cast<size_t>(e)];
        double* dp = dproj.row(i);
        for (int64_t o = 0; o < dout; ++o) dp[o] += rowsum * a_dst[o];
    }
    // source side via the transpose (each row owned by one iteration)
#pragma omp parallel for schedule(static) if (n > 32)
    for (int64_t j = 0; j < n; ++j) {
        const int64_t lo = adj.t_offsets[static_cast<size_t>(j)];
        const int64_t hi = adj.t_offsets[static_cast<size_t>(j + 1)];
        if (lo == hi) continue;
        double* dp = dproj.row(j);
        for (int64_t te = lo; te < hi; ++te) {
            const int64_t e = adj.t_edges[static_cast<size_t>(te)];
            const int32_t i = adj.t_nodes[static_cast<size_t>(te)];
            const double av = alpha[static_cast<size_t>(e)];
            const double dp_e = dpre[static_cast<size_t>(e)];
            const double* g = gm.row(i);
            for (int64_t o = 0; o < dout; ++o) dp[o] += av * g[o] + dp_e * a_src[o];
        }
    }

    // dW += dproj^T * input, one W row per parallel iteration
#pragma omp parallel for schedule(static) if (dout > 4)
    for (int64_t o = 0; o < dout; ++o) {
        double* wrow = dW.row(o);
        for (int64_t i = 0; i < n; ++i) {
            const double dpo = dproj(i, o);
            if (dpo == 0.0) continue;
            const double* in = input.row(i);
            for (int64_t k = 0; k < din; ++k) wrow[k] += dpo * in[k];
        }
    }

    // dh += dproj * W
    const Mat& W = hp.W[t];
#pragma omp parallel for schedule(static) if (n > 32)
    for (int64_t i = 0; i < n; ++i) {
        const double* dp = dproj.row(i);
        double* dhi = dh.row(i);
        for (int64_t o = 0; o < dout; ++o) {
            const double dpo = dp[o];
            if (dpo == 0.0) continue;
            const double* wrow = W.row(o);
            for (int64_t k = 0; k < din; ++k) dhi[k] += dpo * wrow[k];
        }
    }
}

Mat layer_backward(const GatLayer& layer, const LayerTape& tape, const DualEdgeGraph& graph,
                   const Mat& upstream, LayerGrads& lg) {
    const int64_t n = tape.input.rows;
    const int64_t H = static_cast<int64_t>(layer.heads.size());
    const double inv_retained = 1.0 / static_cast<double>(tape.retained);
    Mat dh(n, layer.in_dim);

    for (int64_t hd = 0; hd < H; ++hd) {
        const HeadTape& ht = tape.heads[static_cast<size_t>(hd)];
        if (!ht.active) continue;  // masked heads receive zero gradient

        // through the head mean and the ReLU
        Mat gm(n, layer.out_dim);
        const int64_t sz = gm.size();
#pragma omp parallel for schedule(static) if (sz > 4096)
        for (int64_t e = 0; e < sz; ++e)
            gm.v[static_cast<size_t>(e)] =
                ht.head_out.v[static_cast<size_t>(e)] > 0.0
                    ? upstream.v[static_cast<size_t>(e)] * inv_retained
                    : 0.0;

        HeadGrads& hg = lg.heads[static_cast<size_t>(hd)];
        const GatHeadParams& hp = layer.heads[static_cast<size_t>(hd)];
        for (int t = 0; t < 2; ++t) {
            const TypedAdj& adj = (t == 0) ? graph.spatial : graph.semantic;
            head_type_backward(adj, hp, t, tape.input, ht, gm, hg.dW[t], hg.da[t], dh);
        }
    }
    return dh;
}

} // namespace

Mat model_backward(const GatModel& model, const ModelTape& tape, const Mat& d_logits,
                   GatGradients& grads) {
    require(tape.graph != nullptr, "model_backward: tape was not produced by a forward pass");
    const DualEdgeGraph& graph = *tape.graph;
    const Mat& hid = tape.final_hidden;
    const int64_t n = hid.rows, C = model.classifier.W.rows, dlast = model.classifier.W.cols;
    require(d_logits.rows == n && d_logits.cols == C, "model_backward: d_logits shape mismatch");
    require(static_cast<int64_t>(tape.layers.size()) == static_cast<int64_t>(model.layers.size()),
            "model_backward: tape layer count mismatch");

    // classifier backward
#pragma omp parallel for schedule(static) if (C > 1)
    for (int64_t c = 0; c < C; ++c) {
        double* wrow = grads.classifier.dW.row(c);
        double bsum = 0.0;
        for (int64_t i = 0; i < n; ++i) {
            const double dz = d_logits(i, c);
            bsum += dz;
            const double* hi = hid.row(i);
            for (int64_t k = 0; k < dlast; ++k) wrow[k] += dz * hi[k];
        }
        grads.classifier.db[static_cast<size_t>(c)] += bsum;
    }
    Mat dh(n, dlast);
#pragma omp parallel for schedule(static) if (n > 64)
    for (int64_t i = 0; i < n; ++i) {
        const double* dz = d_logits.row(i);
        double* dhi = dh.row(i);
        for (int64_t c = 0; c < C; ++c) {
            const double g = dz[c];
            if (g == 0.0) continue;
            const double* wrow = model.classifier.W.row(c);
            for (int64_t k = 0; k < dlast; ++k) dhi[k] += g * wrow[k];
        }
    }

    for (int64_t l = static_cast<int64_t>(model.layers.size()) - 1; l >= 0; --l)
        dh = layer_backward(model.layers[static_cast<size_t>(l)], tape.layers[static_cast<size_t>(l)],
                            graph, dh, grads.layers[static_cast<size_t>(l)]);
    return dh;
}

// ---------------------------------------------------------------------------
// Parameter registry
// ---------------------------------------------------------------------------

namespace {

template <class Emb, class LayerVec, class Cls, class FnW, class FnA>
std::vector<ParamBlock> collect_blocks(Emb& emb_proj, std::vector<double>& emb_bias,
                                       double& emb_ps, LayerVec& layers, Cls& cls_w,
                                       std::vector<double>& cls_b, FnW&& get_w, FnA&& get_a) {
    std::vector<ParamBlock> blocks;
    blocks.push_back({emb_proj.v.data(), emb_proj.size(), "embedder.projection"});
    blocks.push_back({emb_bias.data(), static_cast<int64_t>(emb_bias.size()), "embedder.bias"});
    blocks.push_back({&emb_ps, 1, "embedder.pos_scale"});
    for (size_t l = 0; l < layers.size(); ++l) {
        for (size_t hd = 0; hd < layers[l].heads.size(); ++hd) {
            auto& head = layers[l].heads[hd];
            const std::string base = "layer" + std::to_string(l) + ".head" + std::to_string(hd);
            for (int t = 0; t < 2; ++t) {
                const char* suffix = (t == 0) ? "_s" : "_m";
                Mat& W = get_w(head, t);
                std::vector<double>& a = get_a(head, t);
                blocks.push_back({W.v.data(), W.size(), base + ".W" + suffix});
                blocks.push_back({a.data(), static_cast<int64_t>(a.size()), base + ".a" + suffix});
            }
        }
    }
    blocks.push_back({cls_w.v.data(), cls_w.size(), "classifier.W"});
    blocks.push_back({cls_b.data(), static_cast<int64_t>(cls_b.size()), "classifier.b"});
    return blocks;
}

} // namespace

std::vector<ParamBlock> param_blocks(GatModel& model) {
    return collect_blocks(model.embedder.projection, model.embedder.bias, model.embedder.pos_scale,
                          model.layers, model.classifier.W, model.classifier.b,
                          [](GatHeadParams& h, int t) -> Mat& { return h.W[t]; },
                          [](GatHeadParams& h, int t) -> std::vector<double>& { return h.a[t]; });
}

std::vector<ParamBlock> grad_blocks(GatGradients& grads) {
    return collect_blocks(grads.embedder.projection, grads.embedder.bias, grads.embedder.pos_scale,
                          grads.layers, grads.classifier.dW, grads.classifier.db,
                          [](HeadGrads& h, int t) -> Mat& { return h.dW[t]; },
                          [](HeadGrads& h, int t) -> std::vector<double>& { return h.da[t]; });
}

int64_t param_count(const GatModel& model) {
    int64_t n = model.embedder.projection.size() + static_cast<int64_t>(model.embedder.bias.size()) + 1;
    for (const auto& layer : model.layers)
        for (const auto& head : layer.heads)
            for (int t = 0; t < 2; ++t)
                n += head.W[t].size() + static_cast<int64_t>(head.a[t].size());
    n += model.classifier.W.size() + static_cast<int64_t>(model.classifier.b.size());
    return n;
}

} // namespace gatseg
