#pragma once

#include "tfn/data.hpp"
#include "tfn/embeddings.hpp"
#include "tfn/fusion.hpp"
#include "tfn/inference.hpp"

#include <string>
#include <vector>

namespace tfn {

struct TfnConfig {
    int word_dim = 300;
    int e_dim = 128;      // LSTM input projection size
    int lstm_h = 128;
    int lang_out = 128;   // z_l size
    int t_max = 20;       // word padding/truncation length
    int ff_width = 32;    // visual/acoustic hidden width and z_v / z_a size
    int trunk_width = 128;
    int p = 0;            // visual feature dim (from dataset header)
    int q = 0;            // acoustic feature dim
    FusionVariant variant = FusionVariant::Full;
    Task task = Task::Regression;

    std::int64_t fused_dim() const {
        return variant_output_dim(variant, lang_out, ff_width, ff_width);
    }
};

// All trainable parameters of the three embedding subnetworks and the
// inference subnetwork, plus the architecture configuration.
struct TfnModel {
    TfnConfig cfg;
    LanguageSubnetwork language;
    VisualSubnetwork visual;
    AcousticSubnetwork acoustic;
    InferenceNetwork inference;

    TfnModel() = default;
    TfnModel(const TfnConfig& config, std::uint64_t seed) : cfg(config) {
        if (cfg.p < 1 || cfg.q < 1)
            throw ShapeError("TfnModel: visual/acoustic feature dims must be set");
        Rng rng(seed);
        Rng lang_rng = rng.split(1);
        Rng vis_rng = rng.split(2);
        Rng acc_rng = rng.split(3);
        Rng inf_rng = rng.split(4);
        language = LanguageSubnetwork(cfg.word_dim, cfg.e_dim, cfg.lstm_h, cfg.lang_out,
                                      cfg.t_max, lang_rng);
        visual = VisualSubnetwork(cfg.p, cfg.ff_width, vis_rng, "visual");
        acoustic = AcousticSubnetwork(cfg.q, cfg.ff_width, acc_rng, "acoustic");
        inference = InferenceNetwork(cfg.fused_dim(), cfg.trunk_width, cfg.task, inf_rng);
    }

    // Fixed parameter order; serialization and the optimizer both rely on it.
    std::vector<TensorPtr> params() const {
        std::vector<TensorPtr> out = {language.lstm.input_projection,
                                      language.lstm.gate_weights, language.lstm.gate_bias,
                                      language.fc.weight, language.fc.bias};
        for (const auto& l : visual.layers) {
            out.push_back(l.weight);
            out.push_back(l.bias);
        }
        for (const auto& l : acoustic.layers) {
            out.push_back(l.weight);
            out.push_back(l.bias);
        }
        for (const auto& l : inference.trunk) {
            out.push_back(l.weight);
            out.push_back(l.bias);
        }
        out.push_back(inference.decision.weight);
        out.push_back(inference.decision.bias);
        return out;
    }

    // Weight matrices of U_v, U_a and U_s; the L2 penalty covers exactly
    // these (no biases, no language subnetwork).
    std::vector<TensorPtr> l2_weights() const {
        std::vector<TensorPtr> out;
        for (const auto& l : visual.layers) out.push_back(l.weight);
        for (const auto& l : acoustic.layers) out.push_back(l.weight);
        for (const auto& l : inference.trunk) out.push_back(l.weight);
        out.push_back(inference.decision.weight);
        return out;
    }

    void zero_grads() const {
        for (const auto& p : params()) p->zero_grad();
    }
};

inline ModalityEmbeddings embed_utterance(Tape* tape, const TfnModel& model,
                                          const Utterance& u,
                                          const DropoutCtx& dropout = {}) {
    auto v_in = make_tensor({model.cfg.p});
    v_in->v = mean_pool(u.visual_frames);
    auto a_in = make_tensor({model.cfg.q});
    a_in->v = mean_pool(u.acoustic_frames);
    return {language_embed(tape, model.language, u.words),
            visual_embed(tape, model.visual, v_in, dropout),
            acoustic_embed(tape, model.acoustic, a_in, dropout)};
}

// Embeddings -> variant fusion output for one utterance.
inline TensorPtr fused_input(Tape* tape, const TfnModel& model, const Utterance& u,
                             const DropoutCtx& dropout = {}) {
    return fuse_for_variant(tape, embed_utterance(tape, model, u, dropout), model.cfg.variant);
}

inline Prediction predict(const TfnModel& model, const Utterance& u) {
    return infer(model.inference, fused_input(nullptr, model, u));
}

inline double l2_penalty(const TfnModel& model, double coeff) {
    if (coeff < 0) throw std::invalid_argument("l2_penalty: coeff must be >= 0");
    if (coeff == 0) return 0.0;
    double acc = 0.0;
    for (const auto& w : model.l2_weights()) acc += w->v.squaredNorm();
    return coeff * acc;
}

// Analytic gradient of the penalty, added directly to the weight grads.
inline void l2_add_gradients(const TfnModel& model, double coeff) {
    if (coeff == 0) return;
    for (const auto& w : model.l2_weights()) {
        w->ensure_grad();
        w->g += 2.0 * coeff * w->v;
    }
}

} // namespace tfn
