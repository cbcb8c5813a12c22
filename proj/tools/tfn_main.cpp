// Command-line front end: dataset synthesis, training, cross-validation,
// ablation, evaluation and gradient self-verification.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 numeric
// failure (divergence or a gradient-check breach).

#include "tfn/tfn.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

// key = value lines, '#' comments; unknown keys are rejected.
struct RunConfig {
    tfn::TrainConfig train;
    tfn::SynthSpec synth;
};

void apply_config_line(RunConfig& rc, const std::string& key, const std::string& value,
                       int line_no) {
    auto bad_line = [&](const char* why) {
        throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + why +
                                    " '" + key + "'");
    };
    try {
        if (key == "learning_rate" || key == "lr") rc.train.learning_rate = std::stod(value);
        else if (key == "dropout_p") rc.train.dropout_p = std::stod(value);
        else if (key == "l2_coeff") rc.train.l2_coeff = std::stod(value);
        else if (key == "epochs") rc.train.epochs = std::stoi(value);
        else if (key == "batch_size") rc.train.batch_size = std::stoi(value);
        else if (key == "seed") {
            rc.train.seed = std::stoull(value);
            rc.synth.seed = rc.train.seed;
        } else if (key == "task") rc.train.task = tfn::parse_task(value);
        else if (key == "variant") rc.train.variant = tfn::parse_variant(value);
        else if (key == "n_utterances") rc.synth.n_utterances = std::stoi(value);
        else if (key == "n_speakers") rc.synth.n_speakers = std::stoi(value);
        else if (key == "videos_per_speaker") rc.synth.videos_per_speaker = std::stoi(value);
        else if (key == "alpha_l") rc.synth.alpha_l = std::stod(value);
        else if (key == "alpha_v") rc.synth.alpha_v = std::stod(value);
        else if (key == "alpha_a") rc.synth.alpha_a = std::stod(value);
        else if (key == "beta_lv") rc.synth.beta_lv = std::stod(value);
        else if (key == "beta_la") rc.synth.beta_la = std::stod(value);
        else if (key == "beta_va") rc.synth.beta_va = std::stod(value);
        else if (key == "gamma") rc.synth.gamma = std::stod(value);
        else if (key == "noise_std") rc.synth.noise_std = std::stod(value);
        else if (key == "t_l_min") rc.synth.t_l_min = std::stoi(value);
        else if (key == "t_l_max") rc.synth.t_l_max = std::stoi(value);
        else if (key == "t_v_min") rc.synth.t_v_min = std::stoi(value);
        else if (key == "t_v_max") rc.synth.t_v_max = std::stoi(value);
        else if (key == "t_a_min") rc.synth.t_a_min = std::stoi(value);
        else if (key == "t_a_max") rc.synth.t_a_max = std::stoi(value);
        else if (key == "p") rc.synth.p = std::stoi(value);
        else if (key == "q") rc.synth.q = std::stoi(value);
        else if (key == "word_dim") rc.synth.word_dim = std::stoi(value);
        else bad_line("unknown key");
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        bad_line("bad value for key");
    }
}

RunConfig load_run_config(const std::string& path) {
    RunConfig rc;
    if (path.empty()) return rc;
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config file: " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string key, eq, value;
        std::istringstream ls(line);
        if (!(ls >> key)) continue;
        const auto keq = key.find('=');
        if (keq != std::string::npos) {
            value = key.substr(keq + 1);
            key = key.substr(0, keq);
            if (value.empty()) ls >> value;
        } else {
            ls >> eq;
            if (eq == "=") ls >> value;
            else value = eq;
        }
        if (value.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        apply_config_line(rc, key, value, line_no);
    }
    return rc;
}

void print_stats(const tfn::Dataset& ds) {
    const auto st = tfn::dataset_stats(ds);
    std::printf("utterances %d  speakers %d  videos %d\n", st.n_utterances, st.n_speakers,
                st.n_videos);
    std::printf("label mean %.4f  std %.4f  histogram [-3..3]", st.label_mean, st.label_std);
    for (int b : st.label_histogram) std::printf(" %d", b);
    std::printf("\n");
    std::printf("words len %d..%d mean %.1f  visual len %d..%d mean %.1f (dim %d)  "
                "acoustic len %d..%d mean %.1f (dim %d)\n",
                st.words.min, st.words.max, st.words.mean, st.visual.min, st.visual.max,
                st.visual.mean, ds.header.p, st.acoustic.min, st.acoustic.max,
                st.acoustic.mean, ds.header.q);
}

void emit_report(const std::string& text, const std::string& report_path) {
    std::fputs(text.c_str(), stdout);
    if (!report_path.empty()) {
        std::ofstream os(report_path);
        if (!os) throw tfn::DataError("cannot open report file: " + report_path);
        os << text;
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Tensor-fusion multimodal sentiment model"};
    app.require_subcommand(1);

    std::string config_path, data_path, out_path, model_path, report_path;
    std::string task_str = "regression", variant_str = "full";
    std::uint64_t seed = 1;
    int k_folds = 5;
    double eps = 1e-5;
    int gc_seeds = 20;
    bool inject_fault = false;

    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    synth->add_option("--spec", config_path, "config file with generator settings");
    synth->add_option("--out", out_path, "output dataset path")->required();
    synth->add_option("--seed", seed, "generator seed");

    auto* train_cmd = app.add_subcommand("train", "train one model on a train/val split");
    train_cmd->add_option("--data", data_path)->required();
    train_cmd->add_option("--task", task_str);
    train_cmd->add_option("--variant", variant_str);
    train_cmd->add_option("--config", config_path);
    train_cmd->add_option("--out", model_path, "model output path")->required();
    train_cmd->add_option("--seed", seed);

    auto* cv = app.add_subcommand("cv", "speaker-disjoint k-fold cross-validation");
    cv->add_option("--data", data_path)->required();
    cv->add_option("--task", task_str);
    cv->add_option("--variant", variant_str);
    cv->add_option("--config", config_path);
    cv->add_option("--k", k_folds);
    cv->add_option("--seed", seed);
    cv->add_option("--report", report_path);

    auto* ablate_cmd = app.add_subcommand("ablate", "run every fusion variant");
    ablate_cmd->add_option("--data", data_path)->required();
    ablate_cmd->add_option("--task", task_str);
    ablate_cmd->add_option("--config", config_path);
    ablate_cmd->add_option("--k", k_folds);
    ablate_cmd->add_option("--seed", seed);
    ablate_cmd->add_option("--report", report_path);

    auto* gradcheck = app.add_subcommand("gradcheck", "reverse-mode vs finite differences");
    gradcheck->add_option("--seed", gc_seeds, "number of random seeds");
    gradcheck->add_option("--eps", eps, "finite-difference step");
    gradcheck->add_flag("--inject-fault", inject_fault,
                        "corrupt one gradient to verify the harness trips");

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a saved model on a dataset");
    eval_cmd->add_option("--model", model_path)->required();
    eval_cmd->add_option("--data", data_path)->required();
    eval_cmd->add_option("--report", report_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitConfig;
    }

    if (synth->parsed()) {
        RunConfig rc = load_run_config(config_path);
        if (synth->count("--seed")) rc.synth.seed = seed;
        auto ds = tfn::synth_generate(rc.synth);
        tfn::save_dataset(ds, out_path);
        std::printf("wrote %s\n", out_path.c_str());
        print_stats(ds);
        return 0;
    }

    if (train_cmd->parsed()) {
        RunConfig rc = load_run_config(config_path);
        if (train_cmd->count("--task")) rc.train.task = tfn::parse_task(task_str);
        if (train_cmd->count("--variant")) rc.train.variant = tfn::parse_variant(variant_str);
        if (train_cmd->count("--seed")) rc.train.seed = seed;
        auto ds = tfn::load_dataset(data_path);
        tfn::UttRefs train_set, val_set;
        tfn::split_last_videos(ds, [&] {
            std::vector<int> all(ds.utterances.size());
            for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
            return all;
        }(), tfn::kValidationVideos, train_set, val_set);
        auto result = tfn::train(rc.train, tfn::make_arch(ds.header, rc.train), train_set,
                                 val_set);
        tfn::save_model(result.model, model_path);
        std::ofstream hist(model_path + ".history");
        hist << tfn::render_config(rc.train) << "\n";
        for (const auto& e : result.history)
            hist << "epoch " << e.epoch << " train_loss " << tfn::fmt_f64(e.train_loss)
                 << " l2 " << tfn::fmt_f64(e.l2) << " val_score " << tfn::fmt_f64(e.val_score)
                 << "\n";
        std::printf("%s\n", tfn::render_config(rc.train).c_str());
        std::printf("wrote %s (best epoch %d, final train loss %.6f)\n", model_path.c_str(),
                    result.best_epoch, result.history.empty() ? 0.0
                                                              : result.history.back().train_loss);
        return 0;
    }

    if (cv->parsed()) {
        RunConfig rc = load_run_config(config_path);
        if (cv->count("--task")) rc.train.task = tfn::parse_task(task_str);
        if (cv->count("--variant")) rc.train.variant = tfn::parse_variant(variant_str);
        if (cv->count("--seed")) rc.train.seed = seed;
        auto ds = tfn::load_dataset(data_path);
        auto report = tfn::cross_validate(ds, k_folds, rc.train);
        emit_report(tfn::render_config(rc.train) + "\n" + tfn::render_experiment(report),
                    report_path);
        return 0;
    }

    if (ablate_cmd->parsed()) {
        RunConfig rc = load_run_config(config_path);
        if (ablate_cmd->count("--task")) rc.train.task = tfn::parse_task(task_str);
        if (ablate_cmd->count("--seed")) rc.train.seed = seed;
        auto ds = tfn::load_dataset(data_path);
        auto table = tfn::ablate(ds, k_folds, rc.train);
        emit_report(tfn::render_config(rc.train) + "\n" + tfn::render_ablation(table),
                    report_path);
        return 0;
    }

    if (gradcheck->parsed()) {
        tfn::GradCheckOptions opt;
        opt.n_seeds = gc_seeds;
        opt.eps = eps;
        opt.inject_fault = inject_fault;
        const auto results = tfn::run_gradcheck_suite(opt);
        bool ok = true;
        for (const auto& r : results) {
            const bool pass = r.max_rel_err < opt.tolerance;
            ok = ok && pass;
            std::printf("%-22s max_rel_err %.3e  %s\n", r.component.c_str(), r.max_rel_err,
                        pass ? "PASS" : "FAIL");
        }
        return ok ? 0 : kExitNumeric;
    }

    if (eval_cmd->parsed()) {
        auto model = tfn::load_model(model_path);
        auto ds = tfn::load_dataset(data_path);
        if (model.cfg.p != ds.header.p || model.cfg.q != ds.header.q ||
            model.cfg.word_dim != ds.header.word_dim)
            throw tfn::DataError(
                "model expects dims p=" + std::to_string(model.cfg.p) + " q=" +
                std::to_string(model.cfg.q) + " word_dim=" + std::to_string(model.cfg.word_dim) +
                " but dataset has p=" + std::to_string(ds.header.p) + " q=" +
                std::to_string(ds.header.q) + " word_dim=" + std::to_string(ds.header.word_dim));
        auto ev = tfn::evaluate(model, tfn::all_refs(ds));
        emit_report(tfn::report_header() + "\n" + tfn::report_row("eval", ev.row) + "\n",
                    report_path);
        return 0;
    }

    return kExitConfig;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const tfn::NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return kExitNumeric;
    } catch (const tfn::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
