#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdarl/learn/value_table.hpp"

namespace cdarl {

/// A frozen greedy policy over the refined tile partition: a total map
/// (tile, role) -> action index, with a header recording where it came
/// from. Serializes to plain text and round-trips exactly.
struct GreedyPolicy {
    std::string environment;
    std::string mode;
    std::string tiling;
    std::vector<std::string> action_labels;
    long training_runs = 0;
    int refined_tiles = 0;
    int num_roles = 1;
    double gamma = 1.0;
    std::vector<std::uint16_t> choice;  // [tile * num_roles + role]

    int action_at(int refined_tile, int role) const {
        return choice[static_cast<std::size_t>(refined_tile * num_roles + role)];
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write policy file: " + path);
        out << text();
    }

    std::string text() const {
        std::ostringstream out;
        out << "cdarl-policy 1\n";
        out << "environment " << environment << "\n";
        out << "mode " << mode << "\n";
        out << "tiling " << tiling << "\n";
        out << "actions";
        for (const auto& l : action_labels) out << " " << l;
        out << "\n";
        out << "training_runs " << training_runs << "\n";
        out << "gamma " << gamma << "\n";
        out << "tiles " << refined_tiles << "\n";
        out << "roles " << num_roles << "\n";
        for (int tile = 0; tile < refined_tiles; ++tile)
            for (int role = 0; role < num_roles; ++role)
                out << tile << " " << role << " " << action_at(tile, role) << "\n";
        return out.str();
    }

    static GreedyPolicy load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open policy file: " + path);
        std::stringstream buf;
        buf << in.rdbuf();
        return parse(buf.str());
    }

    static GreedyPolicy parse(const std::string& text) {
        std::istringstream in(text);
        GreedyPolicy p;
        std::string line;
        if (!std::getline(in, line) || line.rfind("cdarl-policy", 0) != 0)
            throw std::runtime_error("not a policy file");
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            std::string key;
            ls >> key;
            if (key == "environment") ls >> p.environment;
            else if (key == "mode") ls >> p.mode;
            else if (key == "tiling") ls >> p.tiling;
            else if (key == "actions") {
                std::string label;
                while (ls >> label) p.action_labels.push_back(label);
            } else if (key == "training_runs") ls >> p.training_runs;
            else if (key == "gamma") ls >> p.gamma;
            else if (key == "tiles") ls >> p.refined_tiles;
            else if (key == "roles") {
                ls >> p.num_roles;
                break;
            }
        }
        p.choice.assign(static_cast<std::size_t>(p.refined_tiles * p.num_roles), 0);
        int tile = 0, role = 0, action = 0;
        while (in >> tile >> role >> action)
            p.choice[static_cast<std::size_t>(tile * p.num_roles + role)] =
                static_cast<std::uint16_t>(action);
        return p;
    }
};

/// Snapshot of the greedy policy: per refined tile and role, the argmax of
/// the (tiling-averaged) action values over the tile's legal actions, ties
/// broken by fixed action order.
inline GreedyPolicy extract_greedy_policy(
    const ValueTable& table, const TileConfig& tiles,
    const std::function<SmallActionSet(int)>& legal_for_tile, long training_runs) {
    GreedyPolicy p;
    p.training_runs = training_runs;
    p.refined_tiles = tiles.refined_tile_count();
    p.num_roles = table.num_roles();
    p.gamma = table.gamma();
    p.choice.resize(static_cast<std::size_t>(p.refined_tiles * p.num_roles));
    for (int tile = 0; tile < p.refined_tiles; ++tile) {
        const TileKeys keys = tiles.keys_of_refined(tile);
        const SmallActionSet legal = legal_for_tile(tile);
        for (int role = 0; role < p.num_roles; ++role) {
            Decision d{keys, role, tile, legal};
            p.choice[static_cast<std::size_t>(tile * p.num_roles + role)] =
                static_cast<std::uint16_t>(table.argmax(d));
        }
    }
    return p;
}

}  // namespace cdarl
