#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdarl/market/mixture.hpp"
#include "cdarl/market/types.hpp"

namespace cdarl {

/// Parses "zi:<r_min>:<r_max>:<eta>".
inline ZiParams parse_zi_name(const std::string& name) {
    std::istringstream in(name);
    std::string tag;
    ZiParams z;
    char sep = 0;
    if (!std::getline(in, tag, ':') || tag != "zi")
        throw std::invalid_argument("not a ZI strategy name: " + name);
    if (!(in >> z.r_min >> sep >> z.r_max >> sep >> z.eta))
        throw std::invalid_argument("malformed ZI strategy name: " + name);
    z.validate();
    return z;
}

/// Parses "mm:<num_rungs>:<rung_size>:<min_spread>".
inline MmParams parse_mm_name(const std::string& name) {
    std::istringstream in(name);
    std::string tag;
    MmParams m;
    char sep = 0;
    if (!std::getline(in, tag, ':') || tag != "mm")
        throw std::invalid_argument("not a MM strategy name: " + name);
    if (!(in >> m.num_rungs >> sep >> m.rung_size >> sep >> m.min_spread))
        throw std::invalid_argument("malformed MM strategy name: " + name);
    m.validate();
    return m;
}

struct StrategyTables {
    std::vector<ZiParams> zi;
    std::vector<MmParams> mm;
};

/// Loads strategy tables and named mixtures from a JSON config:
///   {"zi": [[r_min, r_max, eta], ...],
///    "mm": [[num_rungs, rung_size, min_spread], ...],
///    "mixtures": {"<name>": {"background": {"zi:0:250:0.8": 0.6868, ...},
///                            "market_maker": {"mm:100:50:512": 1.0}}}}
struct MarketConfigFile {
    StrategyTables tables;
    std::map<std::string, StrategyMixture> mixtures;
};

inline MarketConfigFile parse_market_config(const nlohmann::json& j) {
    MarketConfigFile cfg;
    if (j.contains("zi"))
        for (const auto& row : j.at("zi"))
            cfg.tables.zi.push_back(ZiParams{row.at(0).get<double>(), row.at(1).get<double>(),
                                             row.at(2).get<double>()});
    if (j.contains("mm"))
        for (const auto& row : j.at("mm"))
            cfg.tables.mm.push_back(MmParams{row.at(0).get<int>(), row.at(1).get<Price>(),
                                             row.at(2).get<Price>()});
    if (j.contains("mixtures")) {
        for (const auto& [name, spec] : j.at("mixtures").items()) {
            StrategyMixture m;
            m.name = name;
            for (const auto& [strat, prob] : spec.at("background").items()) {
                m.bg_strategies.push_back(parse_zi_name(strat));
                m.bg_probs.push_back(prob.get<double>());
            }
            for (const auto& [strat, prob] : spec.at("market_maker").items()) {
                m.mm_strategies.push_back(parse_mm_name(strat));
                m.mm_probs.push_back(prob.get<double>());
            }
            m.validate();
            cfg.mixtures.emplace(name, std::move(m));
        }
    }
    return cfg;
}

inline MarketConfigFile load_market_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open market config: " + path);
    nlohmann::json j;
    in >> j;
    return parse_market_config(j);
}

}  // namespace cdarl
