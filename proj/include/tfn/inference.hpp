#pragma once

#include "tfn/embeddings.hpp"
#include "tfn/layers.hpp"
#include "tfn/ops.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace tfn {

enum class Task { Binary, FiveClass, Regression };

inline const char* task_name(Task t) {
    switch (t) {
        case Task::Binary: return "binary";
        case Task::FiveClass: return "fiveclass";
        case Task::Regression: return "regression";
    }
    return "?";
}

inline Task parse_task(const std::string& s) {
    for (Task t : {Task::Binary, Task::FiveClass, Task::Regression})
        if (s == task_name(t)) return t;
    throw std::invalid_argument("unknown task '" + s + "'");
}

// Label mappings shared by losses and metrics. The label scale is [-3, 3].
// Binary: y >= 0 counts as positive (midpoint cut, zero treated positive).
// Five-class: round half away from zero, clamp to [-2, 2]; returned as a
// class index 0..4 standing for -2..2.
inline void check_label_range(double y) {
    if (!(y >= -3.0 && y <= 3.0))
        throw std::out_of_range("label " + std::to_string(y) + " outside [-3, 3]");
}

inline bool binarize_label(double y) {
    check_label_range(y);
    return y >= 0.0;
}

inline int map_to_five_class(double y) {
    check_label_range(y);
    const int rounded = static_cast<int>(std::lround(y)); // lround rounds half away from zero
    return std::clamp(rounded, -2, 2) + 2;
}

// Two 128-ReLU trunk layers plus a per-task affine decision layer.
struct InferenceNetwork {
    std::vector<DenseLayer> trunk;
    DenseLayer decision;
    Task task = Task::Regression;

    InferenceNetwork() = default;
    InferenceNetwork(std::int64_t in_dim, int width, Task t, Rng& rng) : task(t) {
        trunk.emplace_back(static_cast<int>(in_dim), width, Activation::ReLU, rng,
                           "inference.trunk0");
        trunk.emplace_back(width, width, Activation::ReLU, rng, "inference.trunk1");
        const int out = t == Task::FiveClass ? 5 : 1;
        decision = DenseLayer(width, out, Activation::Identity, rng, "inference.decision");
    }

    std::int64_t in_dim() const { return trunk.front().in_dim(); }
};

// Trunk + decision layer on a vector or {D, B} batch; returns the raw
// decision-layer output (pre-sigmoid/softmax).
inline TensorPtr inference_logits(Tape* tape, const InferenceNetwork& net,
                                  const TensorPtr& fused, const DropoutCtx& dropout = {}) {
    TensorPtr h = fused;
    for (const auto& layer : net.trunk)
        h = dropout.apply(tape, dense_forward(tape, layer, h));
    return dense_forward(tape, net.decision, h);
}

// Task-shaped model output on a batch of logits.
inline TensorPtr head_output(Tape* tape, Task task, const TensorPtr& logits) {
    switch (task) {
        case Task::Binary: return ops::sigmoid(tape, logits);
        case Task::FiveClass: return ops::softmax(tape, logits);
        case Task::Regression:
            // sigmoid squashed to (0,1), mapped affinely onto (-3, 3)
            return ops::add_scalar(tape, ops::scale(tape, ops::sigmoid(tape, logits), 6.0),
                                   -3.0);
    }
    throw std::logic_error("unhandled task");
}

struct Prediction {
    Task task = Task::Regression;
    double binary_p = 0.0;          // Binary
    Eigen::VectorXd class_probs;    // FiveClass, sums to 1
    double score = 0.0;             // Regression, in (-3, 3)
};

inline Prediction infer(const InferenceNetwork& net, const TensorPtr& fused) {
    auto out = head_output(nullptr, net.task, inference_logits(nullptr, net, fused));
    Prediction pred;
    pred.task = net.task;
    switch (net.task) {
        case Task::Binary: pred.binary_p = out->v[0]; break;
        case Task::FiveClass: pred.class_probs = out->v; break;
        case Task::Regression: pred.score = out->v[0]; break;
    }
    return pred;
}

// Per-sample losses on raw labels in [-3, 3]; the task mapping is applied here.
inline double loss(const Prediction& pred, double label, double eps = 1e-12) {
    check_label_range(label);
    switch (pred.task) {
        case Task::Binary: {
            const double y = binarize_label(label) ? 1.0 : 0.0;
            const double p = std::clamp(pred.binary_p, eps, 1.0 - eps);
            return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
        }
        case Task::FiveClass:
            return -std::log(std::max(pred.class_probs[map_to_five_class(label)], eps));
        case Task::Regression: {
            const double d = pred.score - label;
            return d * d;
        }
    }
    throw std::logic_error("unhandled task");
}

// Discrete decisions. Binary: positive iff p >= 0.5 (equivalently logit >= 0).
// Five-class: argmax, ties to the lowest class index. Regression: raw score.
inline bool decide_positive(const Prediction& pred) { return pred.binary_p >= 0.5; }

inline int decide_class(const Prediction& pred) {
    int best = 0;
    for (int i = 1; i < pred.class_probs.size(); ++i)
        if (pred.class_probs[i] > pred.class_probs[best]) best = i;
    return best;
}

inline double decide_score(const Prediction& pred) { return pred.score; }

} // namespace tfn
