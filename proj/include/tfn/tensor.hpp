#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfn {

class ShapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Shape = std::vector<int>;

inline std::int64_t numel(const Shape& shape) {
    std::int64_t n = 1;
    for (int d : shape) {
        if (d < 0) throw ShapeError("negative dimension in shape");
        n *= d;
    }
    return n;
}

inline std::string shape_str(const Shape& shape) {
    std::string s = "[";
    for (size_t i = 0; i < shape.size(); ++i) {
        if (i) s += "x";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

// Dense f64 array with an optional gradient buffer of identical shape.
// Rank 1 is a vector, rank 2 a matrix (column-major flat layout, matching
// Eigen), rank 3 the fusion cube (flattened row-major over its own axes,
// see fusion.hpp). One type serves values, activations and parameters.
struct Tensor {
    Shape shape;
    Eigen::VectorXd v; // values, flat
    Eigen::VectorXd g; // gradient; size 0 until grad is requested
    bool requires_grad = false;
    std::string name;  // set for parameters, used in diagnostics

    Tensor() = default;
    explicit Tensor(Shape s, bool req_grad = false)
        : shape(std::move(s)), requires_grad(req_grad) {
        v = Eigen::VectorXd::Zero(numel(shape));
    }

    std::int64_t size() const { return v.size(); }
    int dim(int i) const { return shape.at(static_cast<size_t>(i)); }
    int rank() const { return static_cast<int>(shape.size()); }

    Eigen::Map<Eigen::MatrixXd> mat() {
        if (rank() != 2) throw ShapeError("mat() on tensor of shape " + shape_str(shape));
        return {v.data(), shape[0], shape[1]};
    }
    Eigen::Map<const Eigen::MatrixXd> mat() const {
        if (rank() != 2) throw ShapeError("mat() on tensor of shape " + shape_str(shape));
        return {v.data(), shape[0], shape[1]};
    }
    Eigen::Map<Eigen::MatrixXd> grad_mat() {
        ensure_grad();
        return {g.data(), shape[0], shape[1]};
    }

    void ensure_grad() {
        if (g.size() != v.size()) g = Eigen::VectorXd::Zero(v.size());
    }
    void zero_grad() {
        if (g.size()) g.setZero();
    }

    void check_finite(const char* what) const {
        if (!v.allFinite())
            throw NumericError(std::string("non-finite values in ") + what +
                               (name.empty() ? "" : " (" + name + ")"));
    }
};

using TensorPtr = std::shared_ptr<Tensor>;

inline TensorPtr make_tensor(Shape shape, bool requires_grad = false) {
    return std::make_shared<Tensor>(std::move(shape), requires_grad);
}

inline TensorPtr make_vector(std::initializer_list<double> vals) {
    auto t = make_tensor({static_cast<int>(vals.size())});
    int i = 0;
    for (double x : vals) t->v[i++] = x;
    return t;
}

// Records the forward order of primitive ops; replaying the backward
// closures in reverse accumulates each gradient exactly once per use.
class Tape {
public:
    void record(std::function<void()> backward_fn) {
        ops_.push_back(std::move(backward_fn));
    }

    bool consumed() const { return consumed_; }
    size_t size() const { return ops_.size(); }

    // Seeds the scalar loss with gradient 1 and replays in reverse.
    // A second backward on the same tape is an error (no double backward).
    void backward(const TensorPtr& loss) {
        if (consumed_)
            throw std::logic_error("backward() called twice on the same tape");
        if (loss->size() != 1)
            throw ShapeError("backward() requires a scalar loss, got shape " +
                             shape_str(loss->shape));
        loss->check_finite("loss");
        loss->ensure_grad();
        loss->g[0] = 1.0;
        for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) (*it)();
        consumed_ = true;
    }

private:
    std::vector<std::function<void()>> ops_;
    bool consumed_ = false;
};

inline void backward(Tape& tape, const TensorPtr& loss) { tape.backward(loss); }

} // namespace tfn
