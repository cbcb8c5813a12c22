#pragma once

#include "tfn/inference.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace tfn {

// One row of the evaluation tables: Acc(%) F1 Acc5(%) MAE r.
// A metric the task cannot produce is left empty; an undefined Pearson r
// (zero variance) is empty as well, never NaN.
struct MetricsRow {
    std::optional<double> binary_acc;
    std::optional<double> f1;
    std::optional<double> five_acc;
    std::optional<double> mae;
    std::optional<double> pearson_r;
    bool r_undefined = false;
};

inline double binary_accuracy(const std::vector<bool>& pred, const std::vector<bool>& truth) {
    if (pred.size() != truth.size() || pred.empty())
        throw std::invalid_argument("binary_accuracy: size mismatch or empty");
    std::int64_t correct = 0;
    for (size_t i = 0; i < pred.size(); ++i) correct += pred[i] == truth[i];
    return static_cast<double>(correct) / static_cast<double>(pred.size());
}

// F1 of the positive class. Zero precision+recall yields 0.
inline double positive_f1(const std::vector<bool>& pred, const std::vector<bool>& truth) {
    if (pred.size() != truth.size() || pred.empty())
        throw std::invalid_argument("positive_f1: size mismatch or empty");
    std::int64_t tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] && truth[i]) ++tp;
        else if (pred[i] && !truth[i]) ++fp;
        else if (!pred[i] && truth[i]) ++fn;
    }
    const double denom = 2.0 * tp + fp + fn;
    return denom > 0 ? 2.0 * tp / denom : 0.0;
}

inline double multiclass_accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.size() != truth.size() || pred.empty())
        throw std::invalid_argument("multiclass_accuracy: size mismatch or empty");
    std::int64_t correct = 0;
    for (size_t i = 0; i < pred.size(); ++i) correct += pred[i] == truth[i];
    return static_cast<double>(correct) / static_cast<double>(pred.size());
}

inline double mean_absolute_error(const std::vector<double>& pred,
                                  const std::vector<double>& truth) {
    if (pred.size() != truth.size() || pred.empty())
        throw std::invalid_argument("mean_absolute_error: size mismatch or empty");
    double acc = 0.0;
    for (size_t i = 0; i < pred.size(); ++i) acc += std::abs(pred[i] - truth[i]);
    return acc / static_cast<double>(pred.size());
}

// Pearson correlation; nullopt when either series has zero variance.
inline std::optional<double> pearson_r(const std::vector<double>& x,
                                       const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("pearson_r: need two equal-length series of size >= 2");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

inline MetricsRow metrics(const std::vector<Prediction>& preds,
                          const std::vector<double>& labels, Task task) {
    if (preds.size() != labels.size() || preds.size() < 2)
        throw std::invalid_argument("metrics: need >= 2 prediction/label pairs");
    MetricsRow row;
    std::vector<bool> truth_bin;
    truth_bin.reserve(labels.size());
    for (double y : labels) truth_bin.push_back(binarize_label(y));

    switch (task) {
        case Task::Binary: {
            std::vector<bool> pred_bin;
            for (const auto& p : preds) pred_bin.push_back(decide_positive(p));
            row.binary_acc = binary_accuracy(pred_bin, truth_bin);
            row.f1 = positive_f1(pred_bin, truth_bin);
            break;
        }
        case Task::FiveClass: {
            std::vector<int> pred_cls, truth_cls;
            for (const auto& p : preds) pred_cls.push_back(decide_class(p));
            for (double y : labels) truth_cls.push_back(map_to_five_class(y));
            row.five_acc = multiclass_accuracy(pred_cls, truth_cls);
            break;
        }
        case Task::Regression: {
            // regression scores support every column: threshold for the
            // binary view, round for the 5-class view
            std::vector<double> scores;
            std::vector<bool> pred_bin;
            std::vector<int> pred_cls, truth_cls;
            for (const auto& p : preds) {
                scores.push_back(p.score);
                pred_bin.push_back(p.score >= 0.0);
                pred_cls.push_back(map_to_five_class(std::clamp(p.score, -3.0, 3.0)));
            }
            for (double y : labels) truth_cls.push_back(map_to_five_class(y));
            row.binary_acc = binary_accuracy(pred_bin, truth_bin);
            row.f1 = positive_f1(pred_bin, truth_bin);
            row.five_acc = multiclass_accuracy(pred_cls, truth_cls);
            row.mae = mean_absolute_error(scores, labels);
            row.pearson_r = pearson_r(scores, labels);
            row.r_undefined = !row.pearson_r.has_value();
            break;
        }
    }
    return row;
}

} // namespace tfn
