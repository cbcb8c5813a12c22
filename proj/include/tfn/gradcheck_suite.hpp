#pragma once

#include "tfn/gradcheck.hpp"
#include "tfn/model.hpp"
#include "tfn/train.hpp"

#include <functional>
#include <string>
#include <vector>

namespace tfn {

// Reverse-mode vs central finite differences, component by component.
// Each check builds a scalar loss, backpropagates once, then sweeps every
// coordinate of every listed tensor with central differences.

namespace gradcheck_detail {

inline double check_against_fd(const std::vector<TensorPtr>& inputs,
                               const std::function<TensorPtr(Tape*)>& forward,
                               double eps) {
    for (const auto& t : inputs) t->zero_grad();
    Tape tape;
    auto loss = forward(&tape);
    tape.backward(loss);
    std::vector<Eigen::VectorXd> analytic;
    for (const auto& t : inputs) {
        t->ensure_grad();
        analytic.push_back(t->g);
    }
    const auto eval = [&] { return forward(nullptr)->v[0]; };
    double max_err = 0.0;
    for (size_t n = 0; n < inputs.size(); ++n) {
        Tensor& t = *inputs[n];
        for (std::int64_t i = 0; i < t.size(); ++i) {
            const double x0 = t.v[i];
            t.v[i] = x0 + eps;
            const double fp = eval();
            t.v[i] = x0 - eps;
            const double fm = eval();
            t.v[i] = x0;
            const double fd = (fp - fm) / (2.0 * eps);
            max_err = std::max(max_err, rel_error(analytic[n][i], fd));
        }
    }
    return max_err;
}

inline TensorPtr random_tensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
    auto t = make_tensor(std::move(shape), true);
    for (std::int64_t i = 0; i < t->size(); ++i) t->v[i] = rng.uniform(lo, hi);
    return t;
}

// Fixed random weights turn a vector output into a smooth scalar loss.
inline TensorPtr weighted_sum(Tape* tape, const TensorPtr& y, const Eigen::VectorXd& r) {
    auto w = make_tensor({static_cast<int>(r.size())});
    w->v = r;
    return ops::sum(tape, ops::mul(tape, y, w));
}

inline Eigen::VectorXd random_weights(std::int64_t n, Rng& rng) {
    Eigen::VectorXd r(n);
    for (std::int64_t i = 0; i < n; ++i) r[i] = rng.uniform(-1.0, 1.0);
    return r;
}

} // namespace gradcheck_detail

struct GradCheckResult {
    std::string component;
    double max_rel_err = 0.0;
};

struct GradCheckOptions {
    int n_seeds = 20;
    double eps = 1e-5;
    double tolerance = 1e-4;
    bool inject_fault = false; // corrupts one analytic gradient; harness self-test
};

inline std::vector<GradCheckResult> run_gradcheck_suite(const GradCheckOptions& opt) {
    using namespace gradcheck_detail;
    std::vector<GradCheckResult> results;
    auto component = [&](const std::string& name,
                         const std::function<double(Rng&)>& one_seed) {
        double worst = 0.0;
        for (int s = 0; s < opt.n_seeds; ++s) {
            Rng rng(0x9000 + 7919ULL * static_cast<std::uint64_t>(s) + stable_hash(name));
            worst = std::max(worst, one_seed(rng));
        }
        results.push_back({name, worst});
    };

    component("dense/relu", [&](Rng& rng) {
        DenseLayer layer(3, 4, Activation::ReLU, rng, "gc.dense");
        for (std::int64_t i = 0; i < layer.bias->size(); ++i)
            layer.bias->v[i] = rng.uniform(0.1, 0.5); // keep pre-activations off the kink
        auto x = random_tensor({3}, rng);
        auto r = random_weights(4, rng);
        double err = check_against_fd(
            {layer.weight, layer.bias, x},
            [&](Tape* t) { return weighted_sum(t, dense_forward(t, layer, x), r); }, opt.eps);
        if (opt.inject_fault) err += 1.0;
        return err;
    });

    component("dense/sigmoid", [&](Rng& rng) {
        DenseLayer layer(3, 4, Activation::Sigmoid, rng, "gc.dense");
        auto x = random_tensor({3}, rng);
        auto r = random_weights(4, rng);
        return check_against_fd(
            {layer.weight, layer.bias, x},
            [&](Tape* t) { return weighted_sum(t, dense_forward(t, layer, x), r); }, opt.eps);
    });

    component("sigmoid", [&](Rng& rng) {
        auto x = random_tensor({5}, rng, -3.0, 3.0);
        auto r = random_weights(5, rng);
        return check_against_fd(
            {x}, [&](Tape* t) { return weighted_sum(t, ops::sigmoid(t, x), r); }, opt.eps);
    });

    component("tanh", [&](Rng& rng) {
        auto x = random_tensor({5}, rng, -3.0, 3.0);
        auto r = random_weights(5, rng);
        return check_against_fd(
            {x}, [&](Tape* t) { return weighted_sum(t, ops::tanh_op(t, x), r); }, opt.eps);
    });

    component("softmax", [&](Rng& rng) {
        auto x = random_tensor({5}, rng, -2.0, 2.0);
        auto r = random_weights(5, rng);
        return check_against_fd(
            {x}, [&](Tape* t) { return weighted_sum(t, ops::softmax(t, x), r); }, opt.eps);
    });

    component("lstm_step", [&](Rng& rng) {
        LstmCell cell(6, 5, 4, rng, "gc.lstm");
        auto x = random_tensor({6}, rng);
        LstmState prev{random_tensor({4}, rng), random_tensor({4}, rng)};
        auto rh = random_weights(4, rng);
        auto rc = random_weights(4, rng);
        return check_against_fd(
            {cell.input_projection, cell.gate_weights, cell.gate_bias, x, prev.h, prev.c},
            [&](Tape* t) {
                auto next = lstm_step(t, cell, x, prev);
                return ops::sum(t, ops::add(t, weighted_sum(t, next.h, rh),
                                            weighted_sum(t, next.c, rc)));
            },
            opt.eps);
    });

    component("outer_fusion", [&](Rng& rng) {
        ModalityEmbeddings e{random_tensor({5}, rng), random_tensor({3}, rng),
                             random_tensor({4}, rng)};
        auto r = random_weights(6 * 4 * 5, rng);
        return check_against_fd(
            {e.z_l, e.z_v, e.z_a},
            [&](Tape* t) {
                return weighted_sum(t, ops::flatten(t, tensor_fuse(t, e).t), r);
            },
            opt.eps);
    });

    const auto head_check = [&](Task task) {
        return [&, task](Rng& rng) {
            InferenceNetwork net(6, 8, task, rng);
            auto x = random_tensor({6}, rng);
            std::vector<TensorPtr> inputs = {x};
            for (const auto& l : net.trunk) {
                inputs.push_back(l.weight);
                inputs.push_back(l.bias);
            }
            inputs.push_back(net.decision.weight);
            inputs.push_back(net.decision.bias);
            return check_against_fd(
                inputs,
                [&](Tape* t) {
                    auto logits = inference_logits(t, net, x);
                    switch (task) {
                        case Task::Binary:
                            return ops::bce_loss(t, ops::sigmoid(t, logits), {1.0});
                        case Task::FiveClass:
                            return ops::nll_loss(t, ops::softmax(t, logits), {2});
                        case Task::Regression:
                            return ops::mse_loss(t, head_output(t, task, logits), {1.5});
                    }
                    throw std::logic_error("unhandled task");
                },
                opt.eps);
        };
    };
    component("head/binary_bce", head_check(Task::Binary));
    component("head/fiveclass_ce", head_check(Task::FiveClass));
    component("head/regression_mse", head_check(Task::Regression));

    component("tfn_end_to_end", [&](Rng& rng) {
        TfnConfig cfg;
        cfg.word_dim = 10;
        cfg.e_dim = 6;
        cfg.lstm_h = 5;
        cfg.lang_out = 6;
        cfg.t_max = 4;
        cfg.ff_width = 3;
        cfg.trunk_width = 8;
        cfg.p = 4;
        cfg.q = 3;
        cfg.variant = FusionVariant::Full;
        cfg.task = Task::Regression;
        TfnModel model(cfg, rng.next_u64());
        // Zero-initialized biases can land a whole ReLU layer exactly on the
        // kink (a dead previous layer makes the pre-activation equal the
        // bias), where subgradients and central differences legitimately
        // disagree. Nudge the biases off zero for the check.
        for (auto* net : {&model.visual, &model.acoustic})
            for (auto& l : net->layers)
                for (std::int64_t i = 0; i < l.bias->size(); ++i)
                    l.bias->v[i] = rng.uniform(0.05, 0.3);
        for (auto& l : model.inference.trunk)
            for (std::int64_t i = 0; i < l.bias->size(); ++i)
                l.bias->v[i] = rng.uniform(0.05, 0.3);

        Utterance u;
        u.id = "gc";
        u.speaker_id = "gc";
        u.label = rng.uniform(-2.0, 2.0);
        const int t_l = 3, t_v = 4, t_a = 2;
        for (int t = 0; t < t_l; ++t) {
            Eigen::VectorXd w(cfg.word_dim);
            for (int d = 0; d < cfg.word_dim; ++d) w[d] = rng.uniform(-1.0, 1.0);
            u.words.push_back(w);
        }
        for (int t = 0; t < t_v; ++t) {
            Eigen::VectorXd f(cfg.p);
            for (int d = 0; d < cfg.p; ++d) f[d] = rng.uniform(-1.0, 1.0);
            u.visual_frames.push_back(f);
        }
        for (int t = 0; t < t_a; ++t) {
            Eigen::VectorXd f(cfg.q);
            for (int d = 0; d < cfg.q; ++d) f[d] = rng.uniform(-1.0, 1.0);
            u.acoustic_frames.push_back(f);
        }

        UttRefs batch{&u};
        return check_against_fd(
            model.params(),
            [&](Tape* t) {
                if (t) model.zero_grads();
                return batch_loss(t, model, batch, {});
            },
            opt.eps);
    });

    return results;
}

} // namespace tfn
