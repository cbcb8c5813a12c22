#pragma once

#include "tfn/tensor.hpp"

#include <cmath>
#include <vector>

namespace tfn {

// Adam with the standard bias-corrected update.
struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long step = 0;
    std::vector<Eigen::VectorXd> m; // first moments, mirror parameter shapes
    std::vector<Eigen::VectorXd> v; // second moments

    explicit AdamState(const std::vector<TensorPtr>& params) {
        m.reserve(params.size());
        v.reserve(params.size());
        for (const auto& p : params) {
            m.emplace_back(Eigen::VectorXd::Zero(p->size()));
            v.emplace_back(Eigen::VectorXd::Zero(p->size()));
        }
    }
};

inline void adam_step(const std::vector<TensorPtr>& params, AdamState& state, double lr) {
    if (params.size() != state.m.size())
        throw ShapeError("adam_step: parameter count does not match optimizer state");
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (size_t i = 0; i < params.size(); ++i) {
        Tensor& p = *params[i];
        p.ensure_grad();
        if (!p.g.allFinite())
            throw NumericError("adam_step: non-finite gradient in parameter " +
                               (p.name.empty() ? std::to_string(i) : p.name));
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * p.g;
        state.v[i] = state.beta2 * state.v[i].array().matrix() +
                     (1.0 - state.beta2) * p.g.cwiseProduct(p.g);
        const Eigen::ArrayXd m_hat = state.m[i].array() / bc1;
        const Eigen::ArrayXd v_hat = state.v[i].array() / bc2;
        p.v.array() -= lr * m_hat / (v_hat.sqrt() + state.eps);
    }
}

} // namespace tfn
