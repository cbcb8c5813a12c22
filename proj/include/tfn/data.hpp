#pragma once

#include "tfn/rng.hpp"
#include "tfn/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace tfn {

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One opinion segment: word vectors, visual/acoustic frame features, label.
struct Utterance {
    std::string id;
    std::string speaker_id;
    std::string video_id;
    std::vector<Eigen::VectorXd> words;           // each word_dim
    std::vector<std::string> word_tokens;          // empty, or parallel to words
    std::vector<Eigen::VectorXd> visual_frames;    // each p
    std::vector<Eigen::VectorXd> acoustic_frames;  // each q
    double label = 0.0;
};

struct SynthSpec {
    int n_utterances = 200;
    int n_speakers = 10;
    int videos_per_speaker = 3;
    double alpha_l = 1.0, alpha_v = 1.0, alpha_a = 1.0;
    double beta_lv = 0.0, beta_la = 0.0, beta_va = 0.0;
    double gamma = 0.0;
    double noise_std = 0.0;
    int t_l_min = 4, t_l_max = 12;
    int t_v_min = 8, t_v_max = 24;
    int t_a_min = 8, t_a_max = 24;
    int p = 8, q = 6;
    int word_dim = 300;
    std::uint64_t seed = 1;

    void validate() const {
        if (n_utterances < 1) throw DataError("synth spec: n_utterances must be >= 1");
        if (n_speakers < 5) throw DataError("synth spec: n_speakers must be >= 5");
        if (videos_per_speaker < 1) throw DataError("synth spec: videos_per_speaker must be >= 1");
        if (noise_std < 0) throw DataError("synth spec: noise_std must be >= 0");
        if (t_l_min < 1 || t_v_min < 1 || t_a_min < 1)
            throw DataError("synth spec: sequence lengths must be >= 1");
        if (t_l_max < t_l_min || t_v_max < t_v_min || t_a_max < t_a_min)
            throw DataError("synth spec: max sequence length below min");
        if (p < 1 || q < 1 || word_dim < 1) throw DataError("synth spec: dims must be >= 1");
    }

    // Noiseless labels must stay inside [-3, 3]; latents are in [-1, 1] so the
    // sum of absolute coefficients bounds the noiseless magnitude.
    double label_scale() const {
        const double denom = std::abs(alpha_l) + std::abs(alpha_v) + std::abs(alpha_a) +
                             std::abs(beta_lv) + std::abs(beta_la) + std::abs(beta_va) +
                             std::abs(gamma);
        return denom > 0 ? 3.0 / denom : 1.0;
    }
};

enum class DatasetSource { Ingested, Synthetic };

struct DatasetHeader {
    int p = 0;
    int q = 0;
    int word_dim = 300;
    DatasetSource source = DatasetSource::Ingested;
    std::optional<SynthSpec> generator_spec;
};

struct Dataset {
    DatasetHeader header;
    std::vector<Utterance> utterances;
    std::map<std::string, Eigen::VectorXd> lexicon; // token -> word vector

    void validate() const;
};

inline void Dataset::validate() const {
    if (header.p < 1 || header.q < 1 || header.word_dim < 1)
        throw DataError("dataset header: feature dims must be >= 1");
    if (utterances.empty()) throw DataError("no utterances");
    for (const auto& u : utterances) {
        if (u.words.empty()) throw DataError("utterance " + u.id + ": empty word sequence");
        if (u.visual_frames.empty())
            throw DataError("utterance " + u.id + ": empty visual sequence");
        if (u.acoustic_frames.empty())
            throw DataError("utterance " + u.id + ": empty acoustic sequence");
        if (!(u.label >= -3.0 && u.label <= 3.0))
            throw DataError("utterance " + u.id + ": label " + std::to_string(u.label) +
                            " outside [-3, 3]");
        for (const auto& w : u.words)
            if (w.size() != header.word_dim)
                throw DataError("utterance " + u.id + ": word dim " +
                                std::to_string(w.size()) + " != " +
                                std::to_string(header.word_dim));
        for (const auto& f : u.visual_frames)
            if (f.size() != header.p)
                throw DataError("utterance " + u.id + ": visual dim " +
                                std::to_string(f.size()) + " != " + std::to_string(header.p));
        for (const auto& f : u.acoustic_frames)
            if (f.size() != header.q)
                throw DataError("utterance " + u.id + ": acoustic dim " +
                                std::to_string(f.size()) + " != " + std::to_string(header.q));
    }
}

// ---------------------------------------------------------------------------
// Synthetic generator.
//
// Latents s_l, s_v, s_a ~ U[-1,1] (s_l quantized to a codebook level), label
//   clamp(scale * (a_l s_l + a_v s_v + a_a s_a
//                  + b_lv s_l s_v + b_la s_l s_a + b_va s_v s_a
//                  + g s_l s_v s_a) + noise, -3, 3).
// Language: codebook tokens; positions divisible by 3 carry a signal token
// whose coordinate 0 equals the quantized s_l, the rest are fillers with
// coordinate 0 = 0. Visual/acoustic frames carry s_v / s_a in coordinate 0
// (plus jitter proportional to noise_std) so mean pooling recovers them.
// ---------------------------------------------------------------------------

namespace detail {
constexpr int kSignalLevels = 21;
constexpr int kFillerTokens = 40;

inline double level_value(int level) {
    return -1.0 + 2.0 * level / (kSignalLevels - 1);
}

inline std::string signal_token(int level) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "sig%02d", level);
    return buf;
}

inline std::string filler_token(int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "w%03d", i);
    return buf;
}

inline std::map<std::string, Eigen::VectorXd> build_codebook(int word_dim, Rng& rng) {
    std::map<std::string, Eigen::VectorXd> lex;
    for (int lvl = 0; lvl < kSignalLevels; ++lvl) {
        Eigen::VectorXd v(word_dim);
        for (int d = 0; d < word_dim; ++d) v[d] = rng.uniform(-0.5, 0.5);
        v[0] = level_value(lvl);
        lex[signal_token(lvl)] = v;
    }
    for (int i = 0; i < kFillerTokens; ++i) {
        Eigen::VectorXd v(word_dim);
        for (int d = 0; d < word_dim; ++d) v[d] = rng.uniform(-0.5, 0.5);
        v[0] = 0.0;
        lex[filler_token(i)] = v;
    }
    return lex;
}
} // namespace detail

inline Dataset synth_generate(const SynthSpec& spec) {
    spec.validate();
    Dataset ds;
    ds.header.p = spec.p;
    ds.header.q = spec.q;
    ds.header.word_dim = spec.word_dim;
    ds.header.source = DatasetSource::Synthetic;
    ds.header.generator_spec = spec;

    // codebook and utterances get independent streams off the one seed
    Rng root(spec.seed);
    Rng cb_rng = root.split(0);
    Rng utt_rng = root.split(1);
    ds.lexicon = detail::build_codebook(spec.word_dim, cb_rng);

    const double scale = spec.label_scale();
    std::vector<int> per_speaker_count(spec.n_speakers, 0);

    for (int n = 0; n < spec.n_utterances; ++n) {
        Utterance u;
        char buf[32];
        std::snprintf(buf, sizeof buf, "u%05d", n);
        u.id = buf;
        const int spk = n % spec.n_speakers;
        std::snprintf(buf, sizeof buf, "spk%03d", spk);
        u.speaker_id = buf;
        const int vid = per_speaker_count[spk]++ % spec.videos_per_speaker;
        std::snprintf(buf, sizeof buf, "spk%03d_vid%02d", spk, vid);
        u.video_id = buf;

        const int level = static_cast<int>(utt_rng.below(detail::kSignalLevels));
        const double s_l = detail::level_value(level);
        const double s_v = utt_rng.uniform(-1.0, 1.0);
        const double s_a = utt_rng.uniform(-1.0, 1.0);

        const int t_l = spec.t_l_min + static_cast<int>(utt_rng.below(
                            static_cast<std::uint64_t>(spec.t_l_max - spec.t_l_min + 1)));
        for (int t = 0; t < t_l; ++t) {
            std::string tok = (t % 3 == 0)
                                  ? detail::signal_token(level)
                                  : detail::filler_token(static_cast<int>(
                                        utt_rng.below(detail::kFillerTokens)));
            u.word_tokens.push_back(tok);
            u.words.push_back(ds.lexicon.at(tok));
        }

        const double jitter = 0.05 * spec.noise_std;
        const int t_v = spec.t_v_min + static_cast<int>(utt_rng.below(
                            static_cast<std::uint64_t>(spec.t_v_max - spec.t_v_min + 1)));
        for (int t = 0; t < t_v; ++t) {
            Eigen::VectorXd f(spec.p);
            for (int d = 0; d < spec.p; ++d) f[d] = utt_rng.uniform(-1.0, 1.0);
            f[0] = s_v + (jitter > 0 ? utt_rng.normal(0.0, jitter) : 0.0);
            u.visual_frames.push_back(std::move(f));
        }
        const int t_a = spec.t_a_min + static_cast<int>(utt_rng.below(
                            static_cast<std::uint64_t>(spec.t_a_max - spec.t_a_min + 1)));
        for (int t = 0; t < t_a; ++t) {
            Eigen::VectorXd f(spec.q);
            for (int d = 0; d < spec.q; ++d) f[d] = utt_rng.uniform(-1.0, 1.0);
            f[0] = s_a + (jitter > 0 ? utt_rng.normal(0.0, jitter) : 0.0);
            u.acoustic_frames.push_back(std::move(f));
        }

        double label = scale * (spec.alpha_l * s_l + spec.alpha_v * s_v +
                                spec.alpha_a * s_a + spec.beta_lv * s_l * s_v +
                                spec.beta_la * s_l * s_a + spec.beta_va * s_v * s_a +
                                spec.gamma * s_l * s_v * s_a);
        if (spec.noise_std > 0) label += utt_rng.normal(0.0, spec.noise_std);
        u.label = std::clamp(label, -3.0, 3.0);
        ds.utterances.push_back(std::move(u));
    }
    ds.validate();
    return ds;
}

// ---------------------------------------------------------------------------
// Text serialization. One record per line; see docs/formats.md.
// ---------------------------------------------------------------------------

inline std::string fmt_f64(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline double parse_f64(const std::string& s, int line_no) {
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw DataError("line " + std::to_string(line_no) + ": bad number '" + s + "'");
    return x;
}

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

inline std::map<std::string, std::string> parse_kv(const std::vector<std::string>& toks,
                                                   size_t from, int line_no) {
    std::map<std::string, std::string> kv;
    for (size_t i = from; i < toks.size(); ++i) {
        const auto eq = toks[i].find('=');
        if (eq == std::string::npos)
            throw DataError("line " + std::to_string(line_no) + ": expected key=value, got '" +
                            toks[i] + "'");
        kv[toks[i].substr(0, eq)] = toks[i].substr(eq + 1);
    }
    return kv;
}

inline Eigen::VectorXd parse_floats(const std::vector<std::string>& toks, size_t from,
                                    int expect, int line_no) {
    if (static_cast<int>(toks.size() - from) != expect)
        throw DataError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(expect) + " values, got " +
                        std::to_string(toks.size() - from));
    Eigen::VectorXd v(expect);
    for (int i = 0; i < expect; ++i) v[i] = parse_f64(toks[from + i], line_no);
    return v;
}

inline void write_spec_kv(std::ostream& os, const SynthSpec& s) {
    os << "genspec n_utterances=" << s.n_utterances << " n_speakers=" << s.n_speakers
       << " videos_per_speaker=" << s.videos_per_speaker << " alpha_l=" << fmt_f64(s.alpha_l)
       << " alpha_v=" << fmt_f64(s.alpha_v) << " alpha_a=" << fmt_f64(s.alpha_a)
       << " beta_lv=" << fmt_f64(s.beta_lv) << " beta_la=" << fmt_f64(s.beta_la)
       << " beta_va=" << fmt_f64(s.beta_va) << " gamma=" << fmt_f64(s.gamma)
       << " noise_std=" << fmt_f64(s.noise_std) << " t_l=" << s.t_l_min << ":" << s.t_l_max
       << " t_v=" << s.t_v_min << ":" << s.t_v_max << " t_a=" << s.t_a_min << ":"
       << s.t_a_max << " p=" << s.p << " q=" << s.q << " word_dim=" << s.word_dim
       << " seed=" << s.seed << "\n";
}

inline void parse_range(const std::string& v, int& lo, int& hi, int line_no) {
    const auto colon = v.find(':');
    if (colon == std::string::npos)
        throw DataError("line " + std::to_string(line_no) + ": expected lo:hi, got '" + v + "'");
    lo = std::stoi(v.substr(0, colon));
    hi = std::stoi(v.substr(colon + 1));
}

inline SynthSpec parse_spec_kv(const std::map<std::string, std::string>& kv, int line_no) {
    SynthSpec s;
    for (const auto& [k, v] : kv) {
        if (k == "n_utterances") s.n_utterances = std::stoi(v);
        else if (k == "n_speakers") s.n_speakers = std::stoi(v);
        else if (k == "videos_per_speaker") s.videos_per_speaker = std::stoi(v);
        else if (k == "alpha_l") s.alpha_l = parse_f64(v, line_no);
        else if (k == "alpha_v") s.alpha_v = parse_f64(v, line_no);
        else if (k == "alpha_a") s.alpha_a = parse_f64(v, line_no);
        else if (k == "beta_lv") s.beta_lv = parse_f64(v, line_no);
        else if (k == "beta_la") s.beta_la = parse_f64(v, line_no);
        else if (k == "beta_va") s.beta_va = parse_f64(v, line_no);
        else if (k == "gamma") s.gamma = parse_f64(v, line_no);
        else if (k == "noise_std") s.noise_std = parse_f64(v, line_no);
        else if (k == "t_l") parse_range(v, s.t_l_min, s.t_l_max, line_no);
        else if (k == "t_v") parse_range(v, s.t_v_min, s.t_v_max, line_no);
        else if (k == "t_a") parse_range(v, s.t_a_min, s.t_a_max, line_no);
        else if (k == "p") s.p = std::stoi(v);
        else if (k == "q") s.q = std::stoi(v);
        else if (k == "word_dim") s.word_dim = std::stoi(v);
        else if (k == "seed") s.seed = std::stoull(v);
        else
            throw DataError("line " + std::to_string(line_no) + ": unknown genspec key '" + k +
                            "'");
    }
    return s;
}

inline std::string dir_of(const std::string& path) {
    const auto slash = path.find_last_of('/');
    return slash == std::string::npos ? std::string() : path.substr(0, slash + 1);
}

} // namespace detail

inline void save_lexicon(const std::map<std::string, Eigen::VectorXd>& lexicon,
                         const std::string& path) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot open lexicon file for writing: " + path);
    os << "tfn-lexicon v1\n";
    for (const auto& [tok, vec] : lexicon) {
        os << tok;
        for (Eigen::Index i = 0; i < vec.size(); ++i) os << ' ' << fmt_f64(vec[i]);
        os << '\n';
    }
}

inline std::map<std::string, Eigen::VectorXd> load_lexicon(const std::string& path,
                                                           int word_dim) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open lexicon file: " + path);
    std::string line;
    int line_no = 0;
    if (!std::getline(is, line) || line != "tfn-lexicon v1")
        throw DataError(path + ": missing 'tfn-lexicon v1' header");
    ++line_no;
    std::map<std::string, Eigen::VectorXd> lex;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto toks = detail::split_ws(line);
        lex[toks[0]] = detail::parse_floats(toks, 1, word_dim, line_no);
    }
    return lex;
}

// Writes the dataset; if a lexicon is present, words with token names go out
// as token references and the lexicon lands in <path>.lexicon.
inline void save_dataset(const Dataset& ds, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot open dataset file for writing: " + path);
    const bool use_lexicon = !ds.lexicon.empty();
    std::string lex_name;
    if (use_lexicon) {
        lex_name = path.substr(detail::dir_of(path).size()) + ".lexicon";
    }
    os << "tfn-dataset v1\n";
    os << "header p=" << ds.header.p << " q=" << ds.header.q
       << " word_dim=" << ds.header.word_dim << " source="
       << (ds.header.source == DatasetSource::Synthetic ? "synthetic" : "ingested");
    if (use_lexicon) os << " lexicon=" << lex_name;
    os << '\n';
    if (ds.header.generator_spec) detail::write_spec_kv(os, *ds.header.generator_spec);

    for (const auto& u : ds.utterances) {
        os << "utterance id=" << u.id << " speaker=" << u.speaker_id
           << " video=" << u.video_id << " label=" << fmt_f64(u.label) << '\n';
        os << "words " << u.words.size() << '\n';
        const bool tokens = !u.word_tokens.empty();
        for (size_t t = 0; t < u.words.size(); ++t) {
            if (tokens) {
                os << "t " << u.word_tokens[t] << '\n';
            } else {
                for (Eigen::Index i = 0; i < u.words[t].size(); ++i)
                    os << (i ? " " : "") << fmt_f64(u.words[t][i]);
                os << '\n';
            }
        }
        os << "visual " << u.visual_frames.size() << '\n';
        for (const auto& f : u.visual_frames) {
            for (Eigen::Index i = 0; i < f.size(); ++i) os << (i ? " " : "") << fmt_f64(f[i]);
            os << '\n';
        }
        os << "acoustic " << u.acoustic_frames.size() << '\n';
        for (const auto& f : u.acoustic_frames) {
            for (Eigen::Index i = 0; i < f.size(); ++i) os << (i ? " " : "") << fmt_f64(f[i]);
            os << '\n';
        }
        os << "end\n";
    }
    if (use_lexicon) save_lexicon(ds.lexicon, path + ".lexicon");
}

inline Dataset load_dataset(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open dataset file: " + path);
    std::string line;
    int line_no = 0;
    auto next_line = [&](const char* what) {
        if (!std::getline(is, line))
            throw DataError("line " + std::to_string(line_no + 1) + ": unexpected EOF, wanted " +
                            what);
        ++line_no;
    };

    next_line("magic");
    if (line != "tfn-dataset v1")
        throw DataError("line 1: not a tfn dataset (missing 'tfn-dataset v1')");
    next_line("header");
    auto htoks = detail::split_ws(line);
    if (htoks.empty() || htoks[0] != "header")
        throw DataError("line " + std::to_string(line_no) + ": expected header record");
    auto hkv = detail::parse_kv(htoks, 1, line_no);

    Dataset ds;
    std::string lex_name;
    for (const auto& [k, v] : hkv) {
        if (k == "p") ds.header.p = std::stoi(v);
        else if (k == "q") ds.header.q = std::stoi(v);
        else if (k == "word_dim") ds.header.word_dim = std::stoi(v);
        else if (k == "source")
            ds.header.source = v == "synthetic" ? DatasetSource::Synthetic
                                                : DatasetSource::Ingested;
        else if (k == "lexicon") lex_name = v;
        else
            throw DataError("line " + std::to_string(line_no) + ": unknown header key '" + k +
                            "'");
    }
    if (ds.header.p < 1 || ds.header.q < 1 || ds.header.word_dim < 1)
        throw DataError("line " + std::to_string(line_no) + ": header dims must be >= 1");
    if (!lex_name.empty())
        ds.lexicon = load_lexicon(detail::dir_of(path) + lex_name, ds.header.word_dim);

    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto toks = detail::split_ws(line);
        if (toks[0] == "genspec") {
            ds.header.generator_spec = detail::parse_spec_kv(
                detail::parse_kv(toks, 1, line_no), line_no);
            continue;
        }
        if (toks[0] != "utterance")
            throw DataError("line " + std::to_string(line_no) + ": expected utterance record, got '" +
                            toks[0] + "'");
        auto kv = detail::parse_kv(toks, 1, line_no);
        Utterance u;
        u.id = kv.count("id") ? kv["id"] : ("line" + std::to_string(line_no));
        if (!kv.count("speaker"))
            throw DataError("line " + std::to_string(line_no) + ": utterance missing speaker");
        u.speaker_id = kv["speaker"];
        u.video_id = kv.count("video") ? kv["video"] : u.speaker_id;
        if (!kv.count("label"))
            throw DataError("line " + std::to_string(line_no) + ": utterance missing label");
        u.label = parse_f64(kv["label"], line_no);
        if (!(u.label >= -3.0 && u.label <= 3.0))
            throw DataError("line " + std::to_string(line_no) + ": label " + kv["label"] +
                            " outside [-3, 3]");

        auto read_section = [&](const char* name, int dim,
                                std::vector<Eigen::VectorXd>& out, bool allow_token,
                                std::vector<std::string>* tokens) {
            next_line(name);
            auto st = detail::split_ws(line);
            if (st.size() != 2 || st[0] != name)
                throw DataError("line " + std::to_string(line_no) + ": expected '" +
                                std::string(name) + " <count>'");
            const int count = std::stoi(st[1]);
            if (count < 1)
                throw DataError("line " + std::to_string(line_no) + ": empty " +
                                std::string(name) + " sequence");
            for (int t = 0; t < count; ++t) {
                next_line("frame");
                auto ft = detail::split_ws(line);
                if (allow_token && !ft.empty() && ft[0] == "t") {
                    if (ft.size() != 2)
                        throw DataError("line " + std::to_string(line_no) +
                                        ": expected 't <token>'");
                    auto it = ds.lexicon.find(ft[1]);
                    if (it == ds.lexicon.end())
                        throw DataError("line " + std::to_string(line_no) + ": token '" + ft[1] +
                                        "' not in lexicon");
                    out.push_back(it->second);
                    if (tokens) tokens->push_back(ft[1]);
                } else {
                    out.push_back(detail::parse_floats(ft, 0, dim, line_no));
                }
            }
        };

        read_section("words", ds.header.word_dim, u.words, true, &u.word_tokens);
        if (u.word_tokens.size() != u.words.size()) u.word_tokens.clear();
        read_section("visual", ds.header.p, u.visual_frames, false, nullptr);
        read_section("acoustic", ds.header.q, u.acoustic_frames, false, nullptr);
        next_line("end");
        if (line != "end")
            throw DataError("line " + std::to_string(line_no) + ": expected 'end'");
        ds.utterances.push_back(std::move(u));
    }
    if (ds.utterances.empty()) throw DataError("no utterances");
    ds.validate();
    return ds;
}

// ---------------------------------------------------------------------------
// Profiling summary.
// ---------------------------------------------------------------------------

struct SeqStats {
    int min = 0, max = 0;
    double mean = 0.0;
};

struct DatasetStats {
    int n_utterances = 0;
    int n_speakers = 0;
    int n_videos = 0;
    double label_mean = 0.0, label_std = 0.0;
    std::vector<int> label_histogram; // 7 bins centered on -3..3
    SeqStats words, visual, acoustic;
};

inline DatasetStats dataset_stats(const Dataset& ds) {
    if (ds.utterances.empty()) throw DataError("no utterances");
    DatasetStats st;
    st.n_utterances = static_cast<int>(ds.utterances.size());
    st.label_histogram.assign(7, 0);
    std::set<std::string> speakers, videos;
    auto fold = [](SeqStats& s, int len, bool first) {
        if (first) {
            s.min = s.max = len;
        } else {
            s.min = std::min(s.min, len);
            s.max = std::max(s.max, len);
        }
        s.mean += len;
    };
    double sum = 0.0, sumsq = 0.0;
    bool first = true;
    for (const auto& u : ds.utterances) {
        speakers.insert(u.speaker_id);
        videos.insert(u.video_id);
        sum += u.label;
        sumsq += u.label * u.label;
        const int bin = std::clamp(static_cast<int>(std::lround(u.label)) + 3, 0, 6);
        st.label_histogram[bin]++;
        fold(st.words, static_cast<int>(u.words.size()), first);
        fold(st.visual, static_cast<int>(u.visual_frames.size()), first);
        fold(st.acoustic, static_cast<int>(u.acoustic_frames.size()), first);
        first = false;
    }
    const double n = st.n_utterances;
    st.label_mean = sum / n;
    st.label_std = std::sqrt(std::max(0.0, sumsq / n - st.label_mean * st.label_mean));
    st.words.mean /= n;
    st.visual.mean /= n;
    st.acoustic.mean /= n;
    st.n_speakers = static_cast<int>(speakers.size());
    st.n_videos = static_cast<int>(videos.size());
    return st;
}

} // namespace tfn
