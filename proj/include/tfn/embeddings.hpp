#pragma once

#include "tfn/data.hpp"
#include "tfn/layers.hpp"
#include "tfn/ops.hpp"

#include <vector>

namespace tfn {

// Shared knob bundle for train-time dropout on hidden layers.
struct DropoutCtx {
    double p = 0.0;
    Rng* rng = nullptr;
    bool training = false;

    TensorPtr apply(Tape* tape, const TensorPtr& x) const {
        if (!rng || !training || p == 0.0) return x;
        return ops::dropout(tape, x, p, *rng, training);
    }
};

struct ModalityEmbeddings {
    TensorPtr z_l; // sigmoid outputs, (0,1)^lang_out
    TensorPtr z_v; // ReLU outputs, >= 0
    TensorPtr z_a;
};

// LSTM over the word sequence, hidden states padded/truncated to t_max rows,
// flattened, then one sigmoid affine layer.
struct LanguageSubnetwork {
    LstmCell lstm;
    DenseLayer fc; // {out_dim, t_max * h_dim}, sigmoid
    int t_max = 20;

    LanguageSubnetwork() = default;
    LanguageSubnetwork(int word_dim, int e_dim, int h_dim, int out_dim, int t_max_,
                       Rng& rng)
        : lstm(word_dim, e_dim, h_dim, rng, "language.lstm"),
          fc(t_max_ * h_dim, out_dim, Activation::Sigmoid, rng, "language.fc"),
          t_max(t_max_) {}
};

// Three dense ReLU layers of equal width; used for both visual and acoustic.
struct FeedforwardSubnetwork {
    std::vector<DenseLayer> layers;

    FeedforwardSubnetwork() = default;
    FeedforwardSubnetwork(int in_dim, int width, Rng& rng, const std::string& name) {
        layers.emplace_back(in_dim, width, Activation::ReLU, rng, name + ".l0");
        layers.emplace_back(width, width, Activation::ReLU, rng, name + ".l1");
        layers.emplace_back(width, width, Activation::ReLU, rng, name + ".l2");
    }

    int out_dim() const { return layers.back().out_dim(); }
};

using VisualSubnetwork = FeedforwardSubnetwork;
using AcousticSubnetwork = FeedforwardSubnetwork;

// Componentwise arithmetic mean over frames.
inline Eigen::VectorXd mean_pool(const std::vector<Eigen::VectorXd>& frames) {
    if (frames.empty()) throw DataError("mean_pool: empty frame sequence");
    Eigen::VectorXd acc = frames[0];
    for (size_t i = 1; i < frames.size(); ++i) {
        if (frames[i].size() != acc.size())
            throw ShapeError("mean_pool: ragged frame dims " + std::to_string(frames[i].size()) +
                             " vs " + std::to_string(acc.size()));
        acc += frames[i];
    }
    return acc / static_cast<double>(frames.size());
}

inline TensorPtr language_embed(Tape* tape, const LanguageSubnetwork& net,
                                const std::vector<Eigen::VectorXd>& words) {
    if (words.empty()) throw DataError("language_embed: empty word sequence");
    const int h_dim = net.lstm.h_dim;
    const int t_use = std::min<int>(static_cast<int>(words.size()), net.t_max);
    LstmState state = lstm_initial_state(net.lstm);
    std::vector<TensorPtr> rows;
    rows.reserve(static_cast<size_t>(net.t_max));
    for (int t = 0; t < t_use; ++t) {
        auto x = make_tensor({static_cast<int>(words[t].size())});
        x->v = words[t];
        state = lstm_step(tape, net.lstm, x, state);
        rows.push_back(state.h);
    }
    for (int t = t_use; t < net.t_max; ++t) rows.push_back(make_tensor({h_dim}));
    auto flat = ops::concat(tape, rows);
    return dense_forward(tape, net.fc, flat);
}

inline TensorPtr feedforward_embed(Tape* tape, const FeedforwardSubnetwork& net,
                                   const TensorPtr& x, const DropoutCtx& dropout = {}) {
    TensorPtr h = x;
    for (const auto& layer : net.layers) h = dropout.apply(tape, dense_forward(tape, layer, h));
    return h;
}

inline TensorPtr visual_embed(Tape* tape, const VisualSubnetwork& net, const TensorPtr& v,
                              const DropoutCtx& dropout = {}) {
    return feedforward_embed(tape, net, v, dropout);
}

inline TensorPtr acoustic_embed(Tape* tape, const AcousticSubnetwork& net,
                                const TensorPtr& a, const DropoutCtx& dropout = {}) {
    return feedforward_embed(tape, net, a, dropout);
}

} // namespace tfn
