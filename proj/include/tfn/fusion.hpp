#pragma once

#include "tfn/embeddings.hpp"
#include "tfn/ops.hpp"

#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

namespace tfn {

// 1-augmented triple outer product. With the default architecture the cube is
// 129 x 33 x 33: language indices 0..127 plus constant slot 128, visual
// 0..31 plus slot 32, acoustic 0..31 plus slot 32. Flat layout is row-major
// over (language, visual, acoustic): flat = (i * 33 + j) * 33 + k.
struct FusedTensor {
    TensorPtr t; // rank 3, {L+1, V+1, A+1}

    int lang_dim() const { return t->dim(0) - 1; }
    int vis_dim() const { return t->dim(1) - 1; }
    int acc_dim() const { return t->dim(2) - 1; }

    double at(int i, int j, int k) const {
        return t->v[(static_cast<std::int64_t>(i) * t->dim(1) + j) * t->dim(2) + k];
    }
};

enum class FusionVariant {
    Full,
    Early,
    UnimodalOnly,
    BimodalOnly,
    TrimodalOnly,
    NoTrimodal,
    LanguageOnly,
    VisualOnly,
    AcousticOnly,
};

inline const char* variant_name(FusionVariant v) {
    switch (v) {
        case FusionVariant::Full: return "full";
        case FusionVariant::Early: return "early";
        case FusionVariant::UnimodalOnly: return "unimodal";
        case FusionVariant::BimodalOnly: return "bimodal";
        case FusionVariant::TrimodalOnly: return "trimodal";
        case FusionVariant::NoTrimodal: return "notrimodal";
        case FusionVariant::LanguageOnly: return "language";
        case FusionVariant::VisualOnly: return "visual";
        case FusionVariant::AcousticOnly: return "acoustic";
    }
    return "?";
}

inline FusionVariant parse_variant(const std::string& s) {
    for (FusionVariant v :
         {FusionVariant::Full, FusionVariant::Early, FusionVariant::UnimodalOnly,
          FusionVariant::BimodalOnly, FusionVariant::TrimodalOnly, FusionVariant::NoTrimodal,
          FusionVariant::LanguageOnly, FusionVariant::VisualOnly,
          FusionVariant::AcousticOnly})
        if (s == variant_name(v)) return v;
    throw std::invalid_argument("unknown fusion variant '" + s + "'");
}

enum class Region { L, V, A, LV, LA, VA, LVA };

inline FusedTensor tensor_fuse(Tape* tape, const ModalityEmbeddings& e) {
    e.z_l->check_finite("z_l");
    e.z_v->check_finite("z_v");
    e.z_a->check_finite("z_a");
    auto u = ops::augment_one(tape, e.z_l);
    auto v = ops::augment_one(tape, e.z_v);
    auto w = ops::augment_one(tape, e.z_a);
    return FusedTensor{ops::outer3(tape, u, v, w)};
}

namespace detail {

using IndexList = std::shared_ptr<const std::vector<std::int64_t>>;

// Flat indices of one semantic block, row-major over (language, visual,
// acoustic) within the block. L/V/A are the unaugmented embedding dims.
inline IndexList region_indices(Region region, int L, int V, int A) {
    static std::map<std::tuple<int, int, int, int>, IndexList> cache;
    const auto key = std::make_tuple(static_cast<int>(region), L, V, A);
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    const auto flat = [V, A](std::int64_t i, std::int64_t j, std::int64_t k) {
        return (i * (V + 1) + j) * (A + 1) + k;
    };
    auto idx = std::make_shared<std::vector<std::int64_t>>();
    const auto loop = [&](int imax, int jmax, int kmax, bool ic, bool jc, bool kc) {
        // a "c" axis is pinned to its constant slot
        for (int i = 0; i < (ic ? 1 : imax); ++i)
            for (int j = 0; j < (jc ? 1 : jmax); ++j)
                for (int k = 0; k < (kc ? 1 : kmax); ++k)
                    idx->push_back(flat(ic ? imax : i, jc ? jmax : j, kc ? kmax : k));
    };
    switch (region) {
        case Region::L: loop(L, V, A, false, true, true); break;
        case Region::V: loop(L, V, A, true, false, true); break;
        case Region::A: loop(L, V, A, true, true, false); break;
        case Region::LV: loop(L, V, A, false, false, true); break;
        case Region::LA: loop(L, V, A, false, true, false); break;
        case Region::VA: loop(L, V, A, true, false, false); break;
        case Region::LVA: loop(L, V, A, false, false, false); break;
    }
    IndexList result = idx;
    cache[key] = result;
    return result;
}

} // namespace detail

inline TensorPtr extract_subtensor(Tape* tape, const FusedTensor& f, Region region) {
    const int L = f.lang_dim(), V = f.vis_dim(), A = f.acc_dim();
    return ops::gather(tape, f.t, detail::region_indices(region, L, V, A));
}

inline std::int64_t variant_output_dim(FusionVariant variant, int L, int V, int A) {
    const std::int64_t lv = static_cast<std::int64_t>(L) * V;
    const std::int64_t la = static_cast<std::int64_t>(L) * A;
    const std::int64_t va = static_cast<std::int64_t>(V) * A;
    const std::int64_t lva = lv * A;
    switch (variant) {
        case FusionVariant::Full: return static_cast<std::int64_t>(L + 1) * (V + 1) * (A + 1);
        case FusionVariant::Early:
        case FusionVariant::UnimodalOnly: return L + V + A;
        case FusionVariant::BimodalOnly: return lv + la + va;
        case FusionVariant::TrimodalOnly: return lva;
        case FusionVariant::NoTrimodal: return L + V + A + lv + la + va;
        case FusionVariant::LanguageOnly: return L;
        case FusionVariant::VisualOnly: return V;
        case FusionVariant::AcousticOnly: return A;
    }
    return 0;
}

// The variant-selected fusion output that feeds the inference subnetwork.
// Early fusion is plain concatenation and never materializes the cube; the
// subtensor variants slice the materialized cube.
inline TensorPtr fuse_for_variant(Tape* tape, const ModalityEmbeddings& e,
                                  FusionVariant variant) {
    switch (variant) {
        case FusionVariant::Early: return ops::concat(tape, {e.z_l, e.z_v, e.z_a});
        case FusionVariant::LanguageOnly: return e.z_l;
        case FusionVariant::VisualOnly: return e.z_v;
        case FusionVariant::AcousticOnly: return e.z_a;
        default: break;
    }
    FusedTensor f = tensor_fuse(tape, e);
    switch (variant) {
        case FusionVariant::Full: return ops::flatten(tape, f.t);
        case FusionVariant::UnimodalOnly:
            return ops::concat(tape, {extract_subtensor(tape, f, Region::L),
                                      extract_subtensor(tape, f, Region::V),
                                      extract_subtensor(tape, f, Region::A)});
        case FusionVariant::BimodalOnly:
            return ops::concat(tape, {extract_subtensor(tape, f, Region::LV),
                                      extract_subtensor(tape, f, Region::LA),
                                      extract_subtensor(tape, f, Region::VA)});
        case FusionVariant::TrimodalOnly: return extract_subtensor(tape, f, Region::LVA);
        case FusionVariant::NoTrimodal:
            return ops::concat(tape, {extract_subtensor(tape, f, Region::L),
                                      extract_subtensor(tape, f, Region::V),
                                      extract_subtensor(tape, f, Region::A),
                                      extract_subtensor(tape, f, Region::LV),
                                      extract_subtensor(tape, f, Region::LA),
                                      extract_subtensor(tape, f, Region::VA)});
        default: throw std::logic_error("unhandled fusion variant");
    }
}

} // namespace tfn
