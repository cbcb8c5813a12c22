#pragma once

#include "tfn/train.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace tfn {

// Text rendering in the evaluation-table column order:
//   Acc(%)  F1  Acc(%)  MAE  r
// (binary accuracy/F1, 5-class accuracy, regression MAE and correlation).

inline std::string report_header(const std::string& label_col = "variant") {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-14s %8s %8s %8s %8s %8s", label_col.c_str(), "Acc(%)",
                  "F1", "Acc(%)", "MAE", "r");
    return buf;
}

inline std::string fmt_metric(const std::optional<double>& v, bool percent) {
    if (!v) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, percent ? "%.2f" : "%.4f", percent ? *v * 100.0 : *v);
    return buf;
}

inline std::string report_row(const std::string& name, const MetricsRow& row) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-14s %8s %8s %8s %8s %8s", name.c_str(),
                  fmt_metric(row.binary_acc, true).c_str(), fmt_metric(row.f1, false).c_str(),
                  fmt_metric(row.five_acc, true).c_str(), fmt_metric(row.mae, false).c_str(),
                  fmt_metric(row.pearson_r, false).c_str());
    return buf;
}

inline std::string render_experiment(const ExperimentReport& report) {
    std::string out = report_header() + "\n";
    for (const auto& f : report.per_fold)
        out += report_row(report.variant + "/fold" + std::to_string(f.fold), f.row) + "\n";
    out += report_row(report.variant + "/mean", report.mean) + "\n";
    return out;
}

inline std::string render_ablation(const std::vector<ExperimentReport>& table) {
    std::string out = report_header() + "\n";
    for (const auto& rep : table) out += report_row(rep.variant, rep.mean) + "\n";
    return out;
}

inline std::string render_config(const TrainConfig& tc) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "config task=%s variant=%s lr=%g dropout=%g l2=%g epochs=%d batch=%d "
                  "seed=%llu",
                  task_name(tc.task), variant_name(tc.variant), tc.learning_rate, tc.dropout_p,
                  tc.l2_coeff, tc.epochs, tc.batch_size,
                  static_cast<unsigned long long>(tc.seed));
    return buf;
}

} // namespace tfn
