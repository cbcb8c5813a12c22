#pragma once

#include "tfn/data.hpp"
#include "tfn/model.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace tfn {

// Model file: a text header (version tag, architecture config, the named
// parameter manifest in serialization order), then a "data" marker and the
// raw little-endian f64 parameter arrays concatenated in manifest order.
// Round-trips are bit-exact by construction.

static_assert(std::endian::native == std::endian::little,
              "model files are little-endian; big-endian hosts are unsupported");

inline void save_model(const TfnModel& model, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot open model file for writing: " + path);
    const auto& c = model.cfg;
    os << "tfn-model v1\n";
    os << "config word_dim=" << c.word_dim << " e_dim=" << c.e_dim << " lstm_h=" << c.lstm_h
       << " lang_out=" << c.lang_out << " t_max=" << c.t_max << " ff_width=" << c.ff_width
       << " trunk_width=" << c.trunk_width << " p=" << c.p << " q=" << c.q
       << " variant=" << variant_name(c.variant) << " task=" << task_name(c.task) << "\n";
    const auto params = model.params();
    for (const auto& p : params) os << "param " << p->name << " " << p->size() << "\n";
    os << "data\n";
    for (const auto& p : params)
        os.write(reinterpret_cast<const char*>(p->v.data()),
                 static_cast<std::streamsize>(p->size() * sizeof(double)));
    if (!os) throw DataError("write failure on model file: " + path);
}

inline TfnModel load_model(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open model file: " + path);
    std::string line;
    if (!std::getline(is, line) || line != "tfn-model v1")
        throw DataError(path + ": not a tfn model (missing 'tfn-model v1')");
    if (!std::getline(is, line) || line.rfind("config ", 0) != 0)
        throw DataError(path + ": missing config record");

    TfnConfig cfg;
    {
        std::istringstream cs(line.substr(7));
        std::string tok;
        while (cs >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) throw DataError(path + ": bad config token " + tok);
            const std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
            if (k == "word_dim") cfg.word_dim = std::stoi(v);
            else if (k == "e_dim") cfg.e_dim = std::stoi(v);
            else if (k == "lstm_h") cfg.lstm_h = std::stoi(v);
            else if (k == "lang_out") cfg.lang_out = std::stoi(v);
            else if (k == "t_max") cfg.t_max = std::stoi(v);
            else if (k == "ff_width") cfg.ff_width = std::stoi(v);
            else if (k == "trunk_width") cfg.trunk_width = std::stoi(v);
            else if (k == "p") cfg.p = std::stoi(v);
            else if (k == "q") cfg.q = std::stoi(v);
            else if (k == "variant") cfg.variant = parse_variant(v);
            else if (k == "task") cfg.task = parse_task(v);
            else throw DataError(path + ": unknown config key " + k);
        }
    }

    std::vector<std::pair<std::string, std::int64_t>> manifest;
    while (std::getline(is, line)) {
        if (line == "data") break;
        std::istringstream ps(line);
        std::string kw, name;
        std::int64_t count = 0;
        if (!(ps >> kw >> name >> count) || kw != "param")
            throw DataError(path + ": bad manifest line '" + line + "'");
        manifest.emplace_back(name, count);
    }
    if (line != "data") throw DataError(path + ": missing data marker");

    TfnModel model(cfg, 0);
    const auto params = model.params();
    if (params.size() != manifest.size())
        throw DataError(path + ": manifest has " + std::to_string(manifest.size()) +
                        " params, architecture expects " + std::to_string(params.size()));
    for (size_t i = 0; i < params.size(); ++i) {
        if (manifest[i].first != params[i]->name || manifest[i].second != params[i]->size())
            throw DataError(path + ": manifest entry '" + manifest[i].first + "' (" +
                            std::to_string(manifest[i].second) + ") does not match parameter '" +
                            params[i]->name + "' (" + std::to_string(params[i]->size()) + ")");
        is.read(reinterpret_cast<char*>(params[i]->v.data()),
                static_cast<std::streamsize>(params[i]->size() * sizeof(double)));
        if (!is) throw DataError(path + ": truncated data section at " + params[i]->name);
    }
    return model;
}

} // namespace tfn
