#pragma once

#include "tfn/data.hpp"
#include "tfn/metrics.hpp"
#include "tfn/model.hpp"
#include "tfn/optim.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace tfn {

struct TrainConfig {
    double learning_rate = 5e-4;
    double dropout_p = 0.15;
    double l2_coeff = 0.01;
    int epochs = 20;
    int batch_size = 32;
    std::uint64_t seed = 1;
    Task task = Task::Regression;
    FusionVariant variant = FusionVariant::Full;

    void validate() const {
        // lr = 0 is allowed: a no-update run is a useful determinism control
        if (!(learning_rate >= 0)) throw std::invalid_argument("learning_rate must be >= 0");
        if (!(dropout_p >= 0 && dropout_p < 1))
            throw std::invalid_argument("dropout_p must be in [0, 1)");
        if (l2_coeff < 0) throw std::invalid_argument("l2_coeff must be >= 0");
        if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
        if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    }
};

inline TfnConfig make_arch(const DatasetHeader& header, const TrainConfig& tc) {
    TfnConfig cfg;
    cfg.word_dim = header.word_dim;
    cfg.p = header.p;
    cfg.q = header.q;
    cfg.task = tc.task;
    cfg.variant = tc.variant;
    return cfg;
}

using UttRefs = std::vector<const Utterance*>;

inline UttRefs all_refs(const Dataset& ds) {
    UttRefs refs;
    refs.reserve(ds.utterances.size());
    for (const auto& u : ds.utterances) refs.push_back(&u);
    return refs;
}

// Mean task loss over one mini-batch; fused inputs are computed per sample
// and stacked so the inference trunk runs as one matrix product.
inline TensorPtr batch_loss(Tape* tape, const TfnModel& model, const UttRefs& batch,
                            const DropoutCtx& dropout) {
    std::vector<TensorPtr> fused;
    fused.reserve(batch.size());
    for (const Utterance* u : batch) fused.push_back(fused_input(tape, model, *u, dropout));
    auto stacked = ops::stack_columns(tape, fused);
    auto logits = inference_logits(tape, model.inference, stacked, dropout);
    switch (model.cfg.task) {
        case Task::Binary: {
            std::vector<double> targets;
            for (const Utterance* u : batch)
                targets.push_back(binarize_label(u->label) ? 1.0 : 0.0);
            return ops::bce_loss(tape, ops::sigmoid(tape, logits), targets);
        }
        case Task::FiveClass: {
            std::vector<int> classes;
            for (const Utterance* u : batch) classes.push_back(map_to_five_class(u->label));
            return ops::nll_loss(tape, ops::softmax(tape, logits), classes);
        }
        case Task::Regression: {
            std::vector<double> targets;
            for (const Utterance* u : batch) targets.push_back(u->label);
            auto preds = head_output(tape, Task::Regression, logits);
            return ops::mse_loss(tape, preds, targets);
        }
    }
    throw std::logic_error("unhandled task");
}

struct Evaluation {
    std::vector<Prediction> preds;
    std::vector<double> labels;
    MetricsRow row;
};

inline Evaluation evaluate(const TfnModel& model, const UttRefs& set) {
    Evaluation ev;
    for (const Utterance* u : set) {
        ev.preds.push_back(predict(model, *u));
        ev.labels.push_back(u->label);
    }
    ev.row = metrics(ev.preds, ev.labels, model.cfg.task);
    return ev;
}

// Higher is better across tasks: regression is scored by -MAE.
inline double validation_score(const MetricsRow& row, Task task) {
    switch (task) {
        case Task::Binary: return row.binary_acc.value_or(0.0);
        case Task::FiveClass: return row.five_acc.value_or(0.0);
        case Task::Regression: return -row.mae.value_or(1e30);
    }
    return 0.0;
}

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0; // mean data loss over batches
    double l2 = 0.0;         // penalty at epoch end
    double val_score = 0.0;
};

struct TrainResult {
    TfnModel model;
    std::vector<EpochStats> history;
    double best_val_score = 0.0;
    int best_epoch = -1;
};

// Mini-batch Adam over mean loss + L2, best-checkpoint selection on the
// validation set. Deterministic for a fixed seed.
inline TrainResult train(const TrainConfig& tc, const TfnConfig& arch, const UttRefs& train_set,
                         const UttRefs& val_set) {
    tc.validate();
    if (train_set.empty()) throw DataError("train: empty training set");

    Rng root(tc.seed);
    Rng init_rng = root.split(0);
    Rng shuffle_rng = root.split(1);
    Rng dropout_rng = root.split(2);

    TrainResult result{TfnModel(arch, init_rng.next_u64())};
    TfnModel& model = result.model;
    const auto params = model.params();
    AdamState adam(params);
    DropoutCtx dropout{tc.dropout_p, &dropout_rng, true};

    std::vector<Eigen::VectorXd> best_params;
    auto snapshot = [&] {
        best_params.clear();
        for (const auto& p : params) best_params.push_back(p->v);
    };

    std::vector<size_t> order(train_set.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 0; epoch < tc.epochs; ++epoch) {
        // Fisher-Yates with the portable generator
        for (size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.below(i)]);

        double loss_sum = 0.0;
        int n_batches = 0;
        for (size_t start = 0; start < order.size(); start += tc.batch_size) {
            UttRefs batch;
            for (size_t i = start; i < std::min(order.size(), start + tc.batch_size); ++i)
                batch.push_back(train_set[order[i]]);
            model.zero_grads();
            Tape tape;
            auto loss = batch_loss(&tape, model, batch, dropout);
            if (!std::isfinite(loss->v[0]))
                throw NumericError("training diverged: non-finite loss at epoch " +
                                   std::to_string(epoch) + ", batch " +
                                   std::to_string(n_batches));
            tape.backward(loss);
            l2_add_gradients(model, tc.l2_coeff);
            adam_step(params, adam, tc.learning_rate);
            loss_sum += loss->v[0];
            ++n_batches;
        }

        EpochStats st;
        st.epoch = epoch;
        st.train_loss = loss_sum / std::max(1, n_batches);
        st.l2 = l2_penalty(model, tc.l2_coeff);
        if (!val_set.empty()) {
            st.val_score = validation_score(evaluate(model, val_set).row, tc.task);
            if (result.best_epoch < 0 || st.val_score > result.best_val_score) {
                result.best_val_score = st.val_score;
                result.best_epoch = epoch;
                snapshot();
            }
        }
        result.history.push_back(st);
    }

    if (!best_params.empty())
        for (size_t i = 0; i < params.size(); ++i) params[i]->v = best_params[i];
    return result;
}

// ---------------------------------------------------------------------------
// Speaker-disjoint cross-validation.
// ---------------------------------------------------------------------------

// Partitions speakers (never utterances) into k folds: sorted unique speaker
// ids, deterministic shuffle from the seed, round-robin assignment.
inline std::vector<std::vector<int>> speaker_folds(const Dataset& ds, int k,
                                                   std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("cross-validation needs k >= 2");
    std::set<std::string> speaker_set;
    for (const auto& u : ds.utterances) speaker_set.insert(u.speaker_id);
    std::vector<std::string> speakers(speaker_set.begin(), speaker_set.end());
    if (static_cast<int>(speakers.size()) < k)
        throw DataError("cross-validation: " + std::to_string(speakers.size()) +
                        " speakers < " + std::to_string(k) + " folds");
    Rng rng(seed);
    for (size_t i = speakers.size(); i > 1; --i)
        std::swap(speakers[i - 1], speakers[rng.below(i)]);
    std::map<std::string, int> fold_of;
    for (size_t i = 0; i < speakers.size(); ++i)
        fold_of[speakers[i]] = static_cast<int>(i % k);
    std::vector<std::vector<int>> folds(k);
    for (size_t i = 0; i < ds.utterances.size(); ++i)
        folds[fold_of[ds.utterances[i].speaker_id]].push_back(static_cast<int>(i));
    return folds;
}

// Validation set = last n videos (by lexicographic video id) of the train fold.
inline void split_last_videos(const Dataset& ds, const std::vector<int>& train_pool,
                              int n_videos, UttRefs& train_out, UttRefs& val_out) {
    std::set<std::string> videos;
    for (int i : train_pool) videos.insert(ds.utterances[i].video_id);
    if (static_cast<int>(videos.size()) <= n_videos)
        throw DataError("train fold has " + std::to_string(videos.size()) +
                        " videos, cannot hold out " + std::to_string(n_videos) +
                        " for validation");
    std::set<std::string> val_videos;
    for (auto it = videos.rbegin(); static_cast<int>(val_videos.size()) < n_videos; ++it)
        val_videos.insert(*it);
    for (int i : train_pool) {
        const Utterance& u = ds.utterances[i];
        (val_videos.count(u.video_id) ? val_out : train_out).push_back(&u);
    }
}

struct FoldReport {
    int fold = 0;
    MetricsRow row;
};

struct ExperimentReport {
    std::string variant;
    TrainConfig config;
    std::vector<FoldReport> per_fold;
    MetricsRow mean;
};

inline MetricsRow mean_rows(const std::vector<FoldReport>& folds) {
    MetricsRow mean;
    auto fold_mean = [&](auto getter) -> std::optional<double> {
        double acc = 0.0;
        int n = 0;
        for (const auto& f : folds)
            if (auto v = getter(f.row)) {
                acc += *v;
                ++n;
            }
        if (n == 0) return std::nullopt;
        return acc / n;
    };
    mean.binary_acc = fold_mean([](const MetricsRow& r) { return r.binary_acc; });
    mean.f1 = fold_mean([](const MetricsRow& r) { return r.f1; });
    mean.five_acc = fold_mean([](const MetricsRow& r) { return r.five_acc; });
    mean.mae = fold_mean([](const MetricsRow& r) { return r.mae; });
    mean.pearson_r = fold_mean([](const MetricsRow& r) { return r.pearson_r; });
    return mean;
}

constexpr int kValidationVideos = 4;

inline ExperimentReport cross_validate(const Dataset& ds, int k, const TrainConfig& tc,
                                       const TfnConfig* arch_override = nullptr) {
    tc.validate();
    const auto folds = speaker_folds(ds, k, tc.seed);
    TfnConfig arch = arch_override ? *arch_override : make_arch(ds.header, tc);
    arch.task = tc.task;
    arch.variant = tc.variant;

    ExperimentReport report;
    report.variant = variant_name(tc.variant);
    report.config = tc;
    Rng root(tc.seed);

    for (int f = 0; f < k; ++f) {
        std::vector<int> train_pool;
        UttRefs test_set;
        for (int g = 0; g < k; ++g) {
            for (int i : folds[g]) {
                if (g == f) test_set.push_back(&ds.utterances[i]);
                else train_pool.push_back(i);
            }
        }
        // speaker disjointness is a hard invariant, not just a convention
        std::set<std::string> train_speakers, test_speakers;
        for (int i : train_pool) train_speakers.insert(ds.utterances[i].speaker_id);
        for (const Utterance* u : test_set) test_speakers.insert(u->speaker_id);
        for (const auto& s : test_speakers)
            if (train_speakers.count(s))
                throw std::logic_error("speaker " + s + " leaked across fold " +
                                       std::to_string(f));

        UttRefs train_set, val_set;
        split_last_videos(ds, train_pool, kValidationVideos, train_set, val_set);

        TrainConfig fold_tc = tc;
        fold_tc.seed = root.split(static_cast<std::uint64_t>(f)).next_u64();
        auto result = train(fold_tc, arch, train_set, val_set);
        report.per_fold.push_back({f, evaluate(result.model, test_set).row});
    }
    report.mean = mean_rows(report.per_fold);
    return report;
}

// Trains every config on the same split, returns the index of the best
// validation score; ties go to the earlier grid entry.
inline size_t grid_search(const std::vector<TrainConfig>& grid, const TfnConfig& arch,
                          const UttRefs& train_set, const UttRefs& val_set) {
    if (grid.empty()) throw std::invalid_argument("grid_search: empty grid");
    size_t best = grid.size();
    double best_score = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        double score;
        try {
            auto result = train(grid[i], arch, train_set, val_set);
            score = validation_score(evaluate(result.model, val_set).row, grid[i].task);
        } catch (const NumericError&) {
            continue; // diverged configs simply lose
        }
        if (best == grid.size() || score > best_score) {
            best = i;
            best_score = score;
        }
    }
    if (best == grid.size()) throw NumericError("grid_search: every configuration diverged");
    return best;
}

// Table-2 row order: three unimodal variants, the three subtensor variants,
// the full model, then early fusion.
inline std::vector<FusionVariant> ablation_variants() {
    return {FusionVariant::LanguageOnly, FusionVariant::VisualOnly,
            FusionVariant::AcousticOnly, FusionVariant::BimodalOnly,
            FusionVariant::TrimodalOnly, FusionVariant::NoTrimodal,
            FusionVariant::Full,         FusionVariant::Early};
}

inline std::vector<ExperimentReport> ablate(const Dataset& ds, int k, const TrainConfig& tc,
                                            const TfnConfig* arch_override = nullptr) {
    std::vector<ExperimentReport> table;
    for (FusionVariant v : ablation_variants()) {
        TrainConfig vtc = tc;
        vtc.variant = v;
        table.push_back(cross_validate(ds, k, vtc, arch_override));
    }
    return table;
}

} // namespace tfn
