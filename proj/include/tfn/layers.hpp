#pragma once

#include "tfn/ops.hpp"
#include "tfn/rng.hpp"
#include "tfn/tensor.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace tfn {

enum class Activation { ReLU, Sigmoid, Identity };

inline const char* activation_name(Activation a) {
    switch (a) {
        case Activation::ReLU: return "relu";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Identity: return "identity";
    }
    return "?";
}

// Xavier/Glorot uniform: limit sqrt(6 / (fan_in + fan_out)).
inline void xavier_init(Tensor& weight, int fan_in, int fan_out, Rng& rng) {
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (std::int64_t i = 0; i < weight.size(); ++i)
        weight.v[i] = rng.uniform(-limit, limit);
}

struct DenseLayer {
    TensorPtr weight; // {out, in}
    TensorPtr bias;   // {out}
    Activation activation = Activation::Identity;

    DenseLayer() = default;
    DenseLayer(int in_dim, int out_dim, Activation act, Rng& rng,
               const std::string& name)
        : activation(act) {
        weight = make_tensor({out_dim, in_dim}, true);
        weight->name = name + ".weight";
        xavier_init(*weight, in_dim, out_dim, rng);
        bias = make_tensor({out_dim}, true);
        bias->name = name + ".bias";
    }

    int in_dim() const { return weight->dim(1); }
    int out_dim() const { return weight->dim(0); }
};

// activation(W x + b); x may be a vector or a {in, B} batch.
inline TensorPtr dense_forward(Tape* tape, const DenseLayer& layer, const TensorPtr& x) {
    auto y = ops::add_bias(tape, ops::matmul(tape, layer.weight, x), layer.bias);
    switch (layer.activation) {
        case Activation::ReLU: return ops::relu(tape, y);
        case Activation::Sigmoid: return ops::sigmoid(tape, y);
        case Activation::Identity: return y;
    }
    return y;
}

// LSTM with forget gate. Words are first projected by input_projection,
// then the four gates are computed in one block from [embedded ; h_prev].
// Gate row order is fixed as (i, f, o, m).
struct LstmCell {
    TensorPtr input_projection; // W_le {e_dim, word_dim}
    TensorPtr gate_weights;     // W_ld {4*h_dim, e_dim + h_dim}
    TensorPtr gate_bias;        // {4*h_dim}
    int h_dim = 128;

    LstmCell() = default;
    LstmCell(int word_dim, int e_dim, int hidden, Rng& rng, const std::string& name)
        : h_dim(hidden) {
        input_projection = make_tensor({e_dim, word_dim}, true);
        input_projection->name = name + ".input_projection";
        xavier_init(*input_projection, word_dim, e_dim, rng);
        gate_weights = make_tensor({4 * h_dim, e_dim + h_dim}, true);
        gate_weights->name = name + ".gate_weights";
        xavier_init(*gate_weights, e_dim + h_dim, 4 * h_dim, rng);
        gate_bias = make_tensor({4 * h_dim}, true);
        gate_bias->name = name + ".gate_bias";
        // forget-gate bias starts at 1 so early training does not wipe the cell
        for (int i = h_dim; i < 2 * h_dim; ++i) gate_bias->v[i] = 1.0;
    }

    int e_dim() const { return input_projection->dim(0); }
    int word_dim() const { return input_projection->dim(1); }
};

struct LstmState {
    TensorPtr h;
    TensorPtr c;
};

inline LstmState lstm_initial_state(const LstmCell& cell) {
    return {make_tensor({cell.h_dim}), make_tensor({cell.h_dim})};
}

//   (i,f,o) = sigmoid, m = tanh of  W_ld [W_le x_t ; h_{t-1}] + b
//   c_t = f.c_{t-1} + i.m
//   h_t = o.tanh(c_t)           (elementwise throughout)
inline LstmState lstm_step(Tape* tape, const LstmCell& cell, const TensorPtr& x_t,
                           const LstmState& prev) {
    ops::require(x_t->rank() == 1 && x_t->dim(0) == cell.word_dim(),
                 "lstm_step: expected word vector of dim " +
                     std::to_string(cell.word_dim()) + ", got " + shape_str(x_t->shape));
    ops::require(prev.h->dim(0) == cell.h_dim && prev.c->dim(0) == cell.h_dim,
                 "lstm_step: state dim mismatch");
    const int h = cell.h_dim;
    auto embedded = ops::matmul(tape, cell.input_projection, x_t);
    auto joint = ops::concat(tape, {embedded, prev.h});
    auto gates = ops::add_bias(tape, ops::matmul(tape, cell.gate_weights, joint),
                               cell.gate_bias);
    auto gate_i = ops::sigmoid(tape, ops::slice(tape, gates, 0, h));
    auto gate_f = ops::sigmoid(tape, ops::slice(tape, gates, h, h));
    auto gate_o = ops::sigmoid(tape, ops::slice(tape, gates, 2 * h, h));
    auto cand = ops::tanh_op(tape, ops::slice(tape, gates, 3 * h, h));
    auto c_t = ops::add(tape, ops::mul(tape, gate_f, prev.c), ops::mul(tape, gate_i, cand));
    auto h_t = ops::mul(tape, gate_o, ops::tanh_op(tape, c_t));
    return {h_t, c_t};
}

} // namespace tfn
