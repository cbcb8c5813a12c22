#pragma once

#include "tfn/tensor.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace tfn {

// Central differences (f(x+eps e_i) - f(x-eps e_i)) / 2eps per coordinate.
// f must return a finite scalar; x is restored before returning.
inline Eigen::VectorXd finite_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd x,
    double eps = 1e-5) {
    if (!(eps > 0.0)) throw std::invalid_argument("finite_difference_gradient: eps must be > 0");
    Eigen::VectorXd grad(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double x0 = x[i];
        x[i] = x0 + eps;
        const double fp = f(x);
        x[i] = x0 - eps;
        const double fm = f(x);
        x[i] = x0;
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw NumericError("finite_difference_gradient: non-finite function value");
        grad[i] = (fp - fm) / (2.0 * eps);
    }
    return grad;
}

inline double rel_error(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline double max_rel_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) m = std::max(m, rel_error(a[i], b[i]));
    return m;
}

// Same as finite_difference_gradient but only for selected coordinates;
// used to spot-check parameters too large to sweep exhaustively.
inline std::vector<double> finite_difference_at(
    const std::function<double()>& f, Eigen::VectorXd& x,
    const std::vector<Eigen::Index>& coords, double eps = 1e-5) {
    std::vector<double> grad;
    grad.reserve(coords.size());
    for (Eigen::Index i : coords) {
        const double x0 = x[i];
        x[i] = x0 + eps;
        const double fp = f();
        x[i] = x0 - eps;
        const double fm = f();
        x[i] = x0;
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw NumericError("finite_difference_at: non-finite function value");
        grad.push_back((fp - fm) / (2.0 * eps));
    }
    return grad;
}

} // namespace tfn
