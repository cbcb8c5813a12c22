#pragma once

#include "tfn/rng.hpp"
#include "tfn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

// Primitive differentiable ops. Every op computes its output eagerly and,
// when a Tape is supplied, records a closure that pulls the output gradient
// and accumulates into the operands' gradient buffers.

namespace tfn {
namespace ops {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ShapeError(msg);
}

// x may be a vector {in} or a batch matrix {in, B}.
inline TensorPtr matmul(Tape* tape, const TensorPtr& W, const TensorPtr& x) {
    require(W->rank() == 2, "matmul: weight must be rank 2, got " + shape_str(W->shape));
    const int out_dim = W->dim(0), in_dim = W->dim(1);
    const int x_rows = x->dim(0);
    require(x_rows == in_dim,
            "matmul: expected input dim " + std::to_string(in_dim) + ", got " +
                std::to_string(x_rows) + " (weight " + shape_str(W->shape) + ")");
    const int batch = x->rank() == 2 ? x->dim(1) : 1;
    auto y = make_tensor(x->rank() == 2 ? Shape{out_dim, batch} : Shape{out_dim});

    Eigen::Map<const Eigen::MatrixXd> Wm(W->v.data(), out_dim, in_dim);
    Eigen::Map<const Eigen::MatrixXd> Xm(x->v.data(), in_dim, batch);
    Eigen::Map<Eigen::MatrixXd>(y->v.data(), out_dim, batch).noalias() = Wm * Xm;
    y->check_finite("matmul output");

    if (tape) {
        tape->record([W, x, y, out_dim, in_dim, batch] {
            y->ensure_grad();
            Eigen::Map<const Eigen::MatrixXd> Wm(W->v.data(), out_dim, in_dim);
            Eigen::Map<const Eigen::MatrixXd> Xm(x->v.data(), in_dim, batch);
            Eigen::Map<const Eigen::MatrixXd> dY(y->g.data(), out_dim, batch);
            if (W->requires_grad || W->g.size()) {
                W->ensure_grad();
                Eigen::Map<Eigen::MatrixXd>(W->g.data(), out_dim, in_dim).noalias() +=
                    dY * Xm.transpose();
            }
            x->ensure_grad();
            Eigen::Map<Eigen::MatrixXd>(x->g.data(), in_dim, batch).noalias() +=
                Wm.transpose() * dY;
        });
    }
    return y;
}

// Adds a bias vector to every column of x.
inline TensorPtr add_bias(Tape* tape, const TensorPtr& x, const TensorPtr& b) {
    require(b->rank() == 1 && b->dim(0) == x->dim(0),
            "add_bias: bias " + shape_str(b->shape) + " vs input " + shape_str(x->shape));
    const int rows = x->dim(0);
    const int batch = x->rank() == 2 ? x->dim(1) : 1;
    auto y = make_tensor(x->shape);
    Eigen::Map<Eigen::MatrixXd>(y->v.data(), rows, batch) =
        Eigen::Map<const Eigen::MatrixXd>(x->v.data(), rows, batch).colwise() +
        Eigen::Map<const Eigen::VectorXd>(b->v.data(), rows);
    if (tape) {
        tape->record([x, b, y, rows, batch] {
            y->ensure_grad();
            x->ensure_grad();
            x->g += y->g;
            b->ensure_grad();
            Eigen::Map<Eigen::VectorXd>(b->g.data(), rows) +=
                Eigen::Map<const Eigen::MatrixXd>(y->g.data(), rows, batch).rowwise().sum();
        });
    }
    return y;
}

inline TensorPtr add(Tape* tape, const TensorPtr& a, const TensorPtr& b) {
    require(a->shape == b->shape, "add: shape mismatch " + shape_str(a->shape) + " vs " +
                                      shape_str(b->shape));
    auto y = make_tensor(a->shape);
    y->v = a->v + b->v;
    if (tape) {
        tape->record([a, b, y] {
            y->ensure_grad();
            a->ensure_grad();
            a->g += y->g;
            b->ensure_grad();
            b->g += y->g;
        });
    }
    return y;
}

inline TensorPtr mul(Tape* tape, const TensorPtr& a, const TensorPtr& b) {
    require(a->shape == b->shape, "mul: shape mismatch " + shape_str(a->shape) + " vs " +
                                      shape_str(b->shape));
    auto y = make_tensor(a->shape);
    y->v = a->v.cwiseProduct(b->v);
    if (tape) {
        tape->record([a, b, y] {
            y->ensure_grad();
            a->ensure_grad();
            a->g += y->g.cwiseProduct(b->v);
            b->ensure_grad();
            b->g += y->g.cwiseProduct(a->v);
        });
    }
    return y;
}

inline TensorPtr scale(Tape* tape, const TensorPtr& x, double k) {
    auto y = make_tensor(x->shape);
    y->v = k * x->v;
    if (tape) {
        tape->record([x, y, k] {
            y->ensure_grad();
            x->ensure_grad();
            x->g += k * y->g;
        });
    }
    return y;
}

inline TensorPtr add_scalar(Tape* tape, const TensorPtr& x, double k) {
    auto y = make_tensor(x->shape);
    y->v = x->v.array() + k;
    if (tape) {
        tape->record([x, y] {
            y->ensure_grad();
            x->ensure_grad();
            x->g += y->g;
        });
    }
    return y;
}

inline TensorPtr relu(Tape* tape, const TensorPtr& x) {
    auto y = make_tensor(x->shape);
    y->v = x->v.cwiseMax(0.0);
    if (tape) {
        tape->record([x, y] {
            y->ensure_grad();
            x->ensure_grad();
            x->g.array() += y->g.array() * (x->v.array() > 0.0).cast<double>();
        });
    }
    return y;
}

inline TensorPtr sigmoid(Tape* tape, const TensorPtr& x) {
    auto y = make_tensor(x->shape);
    y->v = x->v.unaryExpr([](double t) { return 1.0 / (1.0 + std::exp(-t)); });
    if (tape) {
        tape->record([x, y] {
            y->ensure_grad();
            x->ensure_grad();
            x->g.array() += y->g.array() * y->v.array() * (1.0 - y->v.array());
        });
    }
    return y;
}

inline TensorPtr tanh_op(Tape* tape, const TensorPtr& x) {
    auto y = make_tensor(x->shape);
    y->v = x->v.array().tanh();
    if (tape) {
        tape->record([x, y] {
            y->ensure_grad();
            x->ensure_grad();
            x->g.array() += y->g.array() * (1.0 - y->v.array().square());
        });
    }
    return y;
}

// Column-wise softmax; max-shifted for stability. Input {C} or {C, B}.
inline TensorPtr softmax(Tape* tape, const TensorPtr& x) {
    const int rows = x->dim(0);
    const int batch = x->rank() == 2 ? x->dim(1) : 1;
    auto y = make_tensor(x->shape);
    Eigen::Map<const Eigen::MatrixXd> X(x->v.data(), rows, batch);
    Eigen::Map<Eigen::MatrixXd> Y(y->v.data(), rows, batch);
    for (int c = 0; c < batch; ++c) {
        Eigen::ArrayXd e = (X.col(c).array() - X.col(c).maxCoeff()).exp();
        Y.col(c) = e / e.sum();
    }
    if (tape) {
        tape->record([x, y, rows, batch] {
            y->ensure_grad();
            x->ensure_grad();
            Eigen::Map<const Eigen::MatrixXd> Y(y->v.data(), rows, batch);
            Eigen::Map<const Eigen::MatrixXd> dY(y->g.data(), rows, batch);
            Eigen::Map<Eigen::MatrixXd> dX(x->g.data(), rows, batch);
            for (int c = 0; c < batch; ++c) {
                const double dot = Y.col(c).dot(dY.col(c));
                dX.col(c).array() += Y.col(c).array() * (dY.col(c).array() - dot);
            }
        });
    }
    return y;
}

inline TensorPtr concat(Tape* tape, const std::vector<TensorPtr>& parts) {
    require(!parts.empty(), "concat: no inputs");
    std::int64_t total = 0;
    for (const auto& p : parts) {
        require(p->rank() == 1, "concat: rank-1 inputs only");
        total += p->size();
    }
    auto y = make_tensor({static_cast<int>(total)});
    std::int64_t off = 0;
    for (const auto& p : parts) {
        y->v.segment(off, p->size()) = p->v;
        off += p->size();
    }
    if (tape) {
        tape->record([parts, y] {
            y->ensure_grad();
            std::int64_t off = 0;
            for (const auto& p : parts) {
                p->ensure_grad();
                p->g += y->g.segment(off, p->size());
                off += p->size();
            }
        });
    }
    return y;
}

inline TensorPtr slice(Tape* tape, const TensorPtr& x, std::int64_t start, int len) {
    require(x->rank() == 1, "slice: rank-1 input only");
    require(start >= 0 && start + len <= x->size(), "slice: out of range");
    auto y = make_tensor({len});
    y->v = x->v.segment(start, len);
    if (tape) {
        tape->record([x, y, start, len] {
            y->ensure_grad();
            x->ensure_grad();
            x->g.segment(start, len) += y->g;
        });
    }
    return y;
}

// out[i] = x[indices[i]]; backward scatter-adds. Indices may repeat.
inline TensorPtr gather(Tape* tape, const TensorPtr& x,
                        std::shared_ptr<const std::vector<std::int64_t>> indices) {
    auto y = make_tensor({static_cast<int>(indices->size())});
    for (size_t i = 0; i < indices->size(); ++i) y->v[static_cast<std::int64_t>(i)] = x->v[(*indices)[i]];
    if (tape) {
        tape->record([x, y, indices] {
            y->ensure_grad();
            x->ensure_grad();
            for (size_t i = 0; i < indices->size(); ++i)
                x->g[(*indices)[i]] += y->g[static_cast<std::int64_t>(i)];
        });
    }
    return y;
}

// Stacks B same-length vectors into a {D, B} batch matrix.
inline TensorPtr stack_columns(Tape* tape, const std::vector<TensorPtr>& cols) {
    require(!cols.empty(), "stack_columns: no inputs");
    const int rows = cols[0]->dim(0);
    for (const auto& c : cols)
        require(c->rank() == 1 && c->dim(0) == rows, "stack_columns: ragged inputs");
    auto y = make_tensor({rows, static_cast<int>(cols.size())});
    Eigen::Map<Eigen::MatrixXd> Y(y->v.data(), rows, static_cast<int>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c) Y.col(static_cast<int>(c)) = cols[c]->v;
    if (tape) {
        tape->record([cols, y, rows] {
            y->ensure_grad();
            Eigen::Map<const Eigen::MatrixXd> dY(y->g.data(), rows,
                                                 static_cast<int>(cols.size()));
            for (size_t c = 0; c < cols.size(); ++c) {
                cols[c]->ensure_grad();
                cols[c]->g += dY.col(static_cast<int>(c));
            }
        });
    }
    return y;
}

// T[i][j][k] = (u[i] * v[j]) * w[k], flattened row-major over (i, j, k).
// Multiplication order is fixed; tests compare bitwise against a plain
// triple loop with the same order.
inline TensorPtr outer3(Tape* tape, const TensorPtr& u, const TensorPtr& v,
                        const TensorPtr& w) {
    require(u->rank() == 1 && v->rank() == 1 && w->rank() == 1, "outer3: rank-1 inputs");
    const int nu = u->dim(0), nv = v->dim(0), nw = w->dim(0);
    auto t = make_tensor({nu, nv, nw});
    std::int64_t idx = 0;
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            const double uv = u->v[i] * v->v[j];
            for (int k = 0; k < nw; ++k) t->v[idx++] = uv * w->v[k];
        }
    t->check_finite("outer3 output");
    if (tape) {
        tape->record([u, v, w, t, nu, nv, nw] {
            t->ensure_grad();
            u->ensure_grad();
            v->ensure_grad();
            w->ensure_grad();
            std::int64_t idx = 0;
            for (int i = 0; i < nu; ++i)
                for (int j = 0; j < nv; ++j) {
                    const double uv = u->v[i] * v->v[j];
                    double acc_uv = 0.0;
                    for (int k = 0; k < nw; ++k) {
                        const double gt = t->g[idx++];
                        acc_uv += gt * w->v[k];
                        w->g[k] += gt * uv;
                    }
                    u->g[i] += acc_uv * v->v[j];
                    v->g[j] += acc_uv * u->v[i];
                }
        });
    }
    return t;
}

// Appends a constant 1; the gradient of the appended slot is discarded.
inline TensorPtr augment_one(Tape* tape, const TensorPtr& z) {
    require(z->rank() == 1, "augment_one: rank-1 input");
    const int n = z->dim(0);
    auto y = make_tensor({n + 1});
    y->v.head(n) = z->v;
    y->v[n] = 1.0;
    if (tape) {
        tape->record([z, y, n] {
            y->ensure_grad();
            z->ensure_grad();
            z->g += y->g.head(n);
        });
    }
    return y;
}

inline TensorPtr flatten(Tape* tape, const TensorPtr& x) {
    auto y = make_tensor({static_cast<int>(x->size())});
    y->v = x->v;
    if (tape) {
        tape->record([x, y] {
            y->ensure_grad();
            x->ensure_grad();
            x->g += y->g;
        });
    }
    return y;
}

inline TensorPtr sum(Tape* tape, const TensorPtr& x) {
    auto y = make_tensor({1});
    y->v[0] = x->v.sum();
    if (tape) {
        tape->record([x, y] {
            y->ensure_grad();
            x->ensure_grad();
            x->g.array() += y->g[0];
        });
    }
    return y;
}

inline TensorPtr sum_squares(Tape* tape, const TensorPtr& x) {
    auto y = make_tensor({1});
    y->v[0] = x->v.squaredNorm();
    if (tape) {
        tape->record([x, y] {
            y->ensure_grad();
            x->ensure_grad();
            x->g += 2.0 * y->g[0] * x->v;
        });
    }
    return y;
}

// Inverted dropout: zero with probability p, scale survivors by 1/(1-p).
// Identity when not training or p == 0.
inline TensorPtr dropout(Tape* tape, const TensorPtr& x, double p, Rng& rng,
                         bool training) {
    require(p >= 0.0 && p < 1.0, "dropout: p must be in [0, 1)");
    if (!training || p == 0.0) return x;
    auto mask = std::make_shared<Eigen::VectorXd>(x->size());
    const double keep_scale = 1.0 / (1.0 - p);
    for (std::int64_t i = 0; i < x->size(); ++i)
        (*mask)[i] = rng.uniform() < p ? 0.0 : keep_scale;
    auto y = make_tensor(x->shape);
    y->v = x->v.cwiseProduct(*mask);
    if (tape) {
        tape->record([x, y, mask] {
            y->ensure_grad();
            x->ensure_grad();
            x->g += y->g.cwiseProduct(*mask);
        });
    }
    return y;
}

// Mean binary cross-entropy over a batch of probabilities p in {B} or {1, B}.
// Probabilities are clamped to [eps, 1-eps] before the log.
inline TensorPtr bce_loss(Tape* tape, const TensorPtr& p,
                          const std::vector<double>& targets, double eps = 1e-12) {
    const std::int64_t n = p->size();
    require(static_cast<std::int64_t>(targets.size()) == n, "bce_loss: batch size mismatch");
    auto loss = make_tensor({1});
    double acc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double pi = std::clamp(p->v[i], eps, 1.0 - eps);
        acc += -(targets[i] * std::log(pi) + (1.0 - targets[i]) * std::log(1.0 - pi));
    }
    loss->v[0] = acc / static_cast<double>(n);
    if (tape) {
        tape->record([p, loss, targets, eps, n] {
            loss->ensure_grad();
            p->ensure_grad();
            const double s = loss->g[0] / static_cast<double>(n);
            for (std::int64_t i = 0; i < n; ++i) {
                const double pi = std::clamp(p->v[i], eps, 1.0 - eps);
                p->g[i] += s * (pi - targets[i]) / (pi * (1.0 - pi));
            }
        });
    }
    return loss;
}

// Mean negative log-likelihood of the target class, probs {C, B}.
inline TensorPtr nll_loss(Tape* tape, const TensorPtr& probs,
                          const std::vector<int>& classes, double eps = 1e-12) {
    const int C = probs->dim(0);
    const int B = probs->rank() == 2 ? probs->dim(1) : 1;
    require(static_cast<int>(classes.size()) == B, "nll_loss: batch size mismatch");
    auto loss = make_tensor({1});
    double acc = 0.0;
    for (int c = 0; c < B; ++c) {
        require(classes[c] >= 0 && classes[c] < C, "nll_loss: class index out of range");
        acc += -std::log(std::max(probs->v[c * C + classes[c]], eps));
    }
    loss->v[0] = acc / B;
    if (tape) {
        tape->record([probs, loss, classes, eps, C, B] {
            loss->ensure_grad();
            probs->ensure_grad();
            const double s = loss->g[0] / B;
            for (int c = 0; c < B; ++c) {
                const double pi = std::max(probs->v[c * C + classes[c]], eps);
                probs->g[c * C + classes[c]] += -s / pi;
            }
        });
    }
    return loss;
}

// Mean squared error against fixed targets; preds {B} or {1, B}.
inline TensorPtr mse_loss(Tape* tape, const TensorPtr& preds,
                          const std::vector<double>& targets) {
    const std::int64_t n = preds->size();
    require(static_cast<std::int64_t>(targets.size()) == n, "mse_loss: batch size mismatch");
    auto loss = make_tensor({1});
    double acc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double d = preds->v[i] - targets[i];
        acc += d * d;
    }
    loss->v[0] = acc / static_cast<double>(n);
    if (tape) {
        tape->record([preds, loss, targets, n] {
            loss->ensure_grad();
            preds->ensure_grad();
            const double s = 2.0 * loss->g[0] / static_cast<double>(n);
            for (std::int64_t i = 0; i < n; ++i)
                preds->g[i] += s * (preds->v[i] - targets[i]);
        });
    }
    return loss;
}

} // namespace ops
} // namespace tfn
