// Copyright 2026 The fairsamp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Physical qubit connectivity graphs, including the builtin hardware
 * sub-topologies LNN, 5T, 5P, 6A, 7H and Clique(n).
 */
#pragma once

#include "common.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

namespace fairsamp {

/**
 * Undirected connectivity graph over physical qubits 0..size()-1.
 *
 * Construction rejects self loops, out-of-range endpoints and disconnected
 * graphs, and precomputes all-pairs hop distances.
 */
class Topology {
  public:
    using Edge = std::pair<std::size_t, std::size_t>;

    Topology(std::string name, std::size_t num_nodes, std::vector<Edge> edges)
        : name_(std::move(name)), size_(num_nodes) {
        require(size_ >= 1, "topology '" + name_ + "' has no nodes");
        adjacency_.assign(size_ * size_, false);
        for (auto [a, b] : edges) {
            require(a < size_ && b < size_,
                    "topology '" + name_ + "' edge references unknown node");
            require(a != b, "topology '" + name_ + "' has a self loop");
            if (a > b) {
                std::swap(a, b);
            }
            if (!adjacency_[a * size_ + b]) {
                adjacency_[a * size_ + b] = adjacency_[b * size_ + a] = true;
                edges_.emplace_back(a, b);
            }
        }
        std::sort(edges_.begin(), edges_.end());
        compute_distances();
    }

    [[nodiscard]] const std::string &name() const { return name_; }
    [[nodiscard]] std::size_t size() const { return size_; }
    [[nodiscard]] const std::vector<Edge> &edges() const { return edges_; }

    [[nodiscard]] bool has_edge(std::size_t a, std::size_t b) const {
        return a < size_ && b < size_ && adjacency_[a * size_ + b];
    }

    [[nodiscard]] std::size_t distance(std::size_t a, std::size_t b) const {
        return distance_[a * size_ + b];
    }

    [[nodiscard]] std::vector<std::size_t> neighbors(std::size_t a) const {
        std::vector<std::size_t> out;
        for (std::size_t b = 0; b < size_; ++b) {
            if (adjacency_[a * size_ + b]) {
                out.push_back(b);
            }
        }
        return out;
    }

    [[nodiscard]] bool is_complete() const {
        return edges_.size() == size_ * (size_ - 1) / 2;
    }

  private:
    void compute_distances() {
        constexpr auto inf = std::numeric_limits<std::size_t>::max();
        distance_.assign(size_ * size_, inf);
        for (std::size_t s = 0; s < size_; ++s) {
            std::queue<std::size_t> frontier;
            distance_[s * size_ + s] = 0;
            frontier.push(s);
            while (!frontier.empty()) {
                const auto u = frontier.front();
                frontier.pop();
                for (std::size_t v = 0; v < size_; ++v) {
                    if (adjacency_[u * size_ + v] &&
                        distance_[s * size_ + v] == inf) {
                        distance_[s * size_ + v] = distance_[s * size_ + u] + 1;
                        frontier.push(v);
                    }
                }
            }
        }
        require(std::find(distance_.begin(), distance_.end(), inf) ==
                    distance_.end(),
                "topology '" + name_ + "' is not connected");
    }

    std::string name_;
    std::size_t size_;
    std::vector<Edge> edges_;
    std::vector<bool> adjacency_;
    std::vector<std::size_t> distance_;
};

inline Topology clique_topology(std::size_t n) {
    std::vector<Topology::Edge> edges;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            edges.emplace_back(a, b);
        }
    }
    return {"Clique(" + std::to_string(n) + ")", n, std::move(edges)};
}

/**
 * Builtin sub-topology by name: LNN, 5T, 5P, 6A, 7H, or Clique. A bare
 * "Clique" takes its size from `clique_size`; "Clique(7)" or "Clique7" fix it.
 */
inline Topology builtin_topology(std::string name,
                                 std::size_t clique_size = 0) {
    std::string key;
    for (char c : name) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            key += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        }
    }
    if (key == "LNN") {
        return {"LNN", 3, {{0, 1}, {1, 2}}};
    }
    if (key == "5T") {
        return {"5T", 5, {{0, 1}, {1, 4}, {1, 2}, {2, 3}}};
    }
    if (key == "5P") {
        return {"5P", 5, {{0, 3}, {0, 1}, {3, 2}, {1, 2}, {1, 4}}};
    }
    if (key == "6A") {
        return {"6A", 6, {{0, 3}, {0, 1}, {3, 2}, {1, 2}, {1, 4}, {2, 5}}};
    }
    if (key == "7H") {
        return {"7H", 7, {{0, 1}, {4, 3}, {1, 2}, {2, 3}, {1, 5}, {3, 6}}};
    }
    if (key.rfind("CLIQUE", 0) == 0) {
        std::string rest = key.substr(6);
        if (!rest.empty() && rest.front() == '(' && rest.back() == ')') {
            rest = rest.substr(1, rest.size() - 2);
        }
        std::size_t n = clique_size;
        if (!rest.empty()) {
            require(std::all_of(rest.begin(), rest.end(),
                                [](char c) { return std::isdigit(c); }),
                    "bad clique size in '" + name + "'");
            n = std::stoul(rest);
        }
        require(n >= 1, "clique topology needs an explicit size");
        return clique_topology(n);
    }
    throw Error("unknown topology '" + name + "'");
}

// JSON: {"name": str, "nodes": [ids], "edges": [[a,b],...]}

inline nlohmann::json to_json(const Topology &t) {
    nlohmann::json j;
    j["name"] = t.name();
    j["nodes"] = nlohmann::json::array();
    for (std::size_t i = 0; i < t.size(); ++i) {
        j["nodes"].push_back(i);
    }
    j["edges"] = nlohmann::json::array();
    for (auto [a, b] : t.edges()) {
        j["edges"].push_back({a, b});
    }
    return j;
}

/// Node ids may be arbitrary distinct integers; they are renumbered to
/// 0..size-1 in ascending id order.
inline Topology topology_from_json(const nlohmann::json &j) {
    try {
        auto ids = j.at("nodes").get<std::vector<long long>>();
        std::vector<long long> sorted = ids;
        std::sort(sorted.begin(), sorted.end());
        require(std::adjacent_find(sorted.begin(), sorted.end()) ==
                    sorted.end(),
                "topology JSON has duplicate node ids");
        auto index_of = [&](long long id) {
            auto it = std::lower_bound(sorted.begin(), sorted.end(), id);
            require(it != sorted.end() && *it == id,
                    "topology edge references unknown node " +
                        std::to_string(id));
            return static_cast<std::size_t>(it - sorted.begin());
        };
        std::vector<Topology::Edge> edges;
        for (const auto &e : j.at("edges")) {
            require(e.is_array() && e.size() == 2,
                    "topology edges must be [a, b]");
            edges.emplace_back(index_of(e[0].get<long long>()),
                               index_of(e[1].get<long long>()));
        }
        return {j.value("name", std::string("custom")), sorted.size(),
                std::move(edges)};
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("malformed topology JSON: ") + e.what());
    }
}

inline Topology load_topology_json(const std::string &path) {
    std::ifstream in(path);
    require(in.good(), "cannot open topology file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw Error("cannot parse '" + path + "': " + e.what());
    }
    return topology_from_json(j);
}

} // namespace fairsamp
