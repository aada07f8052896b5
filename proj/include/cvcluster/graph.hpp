// Copyright 2026 The cvcluster Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Weighted undirected graphs describing which modes are linked by CZ gates.
//
// Vertices are 0-based in the C++ API. Text formats, CLI flags and error
// messages use 1-based vertex numbers.

#include "cvcluster/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cvcluster {

struct Edge {
    std::size_t i;
    std::size_t j;
    double weight = 1.0;
};

inline std::string describe_edge(const Edge &e) {
    std::ostringstream out;
    out << "(" << e.i + 1 << ", " << e.j + 1 << ", weight " << e.weight << ")";
    return out.str();
}

/// Vertex count, symmetric zero-diagonal adjacency matrix and the edge list
/// that generated it. Edges are stored with i < j in construction order.
class Graph {
   public:
    Graph(std::size_t n_vertices, const std::vector<Edge> &edges)
        : n_(n_vertices),
          adjacency_(Matrix::Zero(static_cast<Eigen::Index>(n_vertices), static_cast<Eigen::Index>(n_vertices))) {
        if (n_vertices == 0) {
            throw std::invalid_argument("graph needs at least one vertex");
        }
        edges_.reserve(edges.size());
        for (const Edge &e : edges) {
            if (e.i >= n_ || e.j >= n_) {
                throw std::invalid_argument(
                    "edge " + describe_edge(e) + " has a vertex outside 1.." + std::to_string(n_));
            }
            if (e.i == e.j) {
                throw std::invalid_argument("edge " + describe_edge(e) + " is a self-loop");
            }
            if (!std::isfinite(e.weight) || e.weight == 0.0) {
                throw std::invalid_argument("edge " + describe_edge(e) + " needs a finite nonzero weight");
            }
            const auto lo = static_cast<Eigen::Index>(std::min(e.i, e.j));
            const auto hi = static_cast<Eigen::Index>(std::max(e.i, e.j));
            if (adjacency_(lo, hi) != 0.0) {
                throw std::invalid_argument("edge " + describe_edge(e) + " duplicates an earlier edge");
            }
            adjacency_(lo, hi) = e.weight;
            adjacency_(hi, lo) = e.weight;
            edges_.push_back({static_cast<std::size_t>(lo), static_cast<std::size_t>(hi), e.weight});
        }
    }

    std::size_t n_vertices() const {
        return n_;
    }
    const Matrix &adjacency() const {
        return adjacency_;
    }
    const std::vector<Edge> &edges() const {
        return edges_;
    }

    bool has_edge(std::size_t i, std::size_t j) const {
        return i < n_ && j < n_ &&
               adjacency_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0;
    }

    bool has_unit_weights() const {
        for (const Edge &e : edges_) {
            if (e.weight != 1.0) {
                return false;
            }
        }
        return true;
    }

    /// Same vertex count and adjacency; edge order is irrelevant.
    friend bool operator==(const Graph &a, const Graph &b) {
        return a.n_ == b.n_ && a.adjacency_ == b.adjacency_;
    }

   private:
    std::size_t n_;
    Matrix adjacency_;
    std::vector<Edge> edges_;
};

inline Graph custom_graph(std::size_t n, const std::vector<Edge> &edges) {
    return Graph(n, edges);
}

/// Linear chain 0-1-...-(n-1).
inline Graph path_graph(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("path graph needs n >= 1");
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        edges.push_back({i, i + 1});
    }
    return Graph(n, edges);
}

/// Path plus the closing edge (0, n-1). cycle_graph(4) is the square cluster.
inline Graph cycle_graph(std::size_t n) {
    if (n < 3) {
        throw std::invalid_argument("cycle graph needs n >= 3");
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        edges.push_back({i, i + 1});
    }
    edges.push_back({0, n - 1});
    return Graph(n, edges);
}

/// Vertex 0 joined to every other vertex. star_graph(4) is the T-shaped cluster.
inline Graph star_graph(std::size_t n) {
    if (n < 2) {
        throw std::invalid_argument("star graph needs n >= 2");
    }
    std::vector<Edge> edges;
    for (std::size_t j = 1; j < n; ++j) {
        edges.push_back({0, j});
    }
    return Graph(n, edges);
}

/// rows x cols nearest-neighbour lattice, vertex r*cols + c.
inline Graph grid_graph(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("grid graph needs rows >= 1 and cols >= 1");
    }
    std::vector<Edge> edges;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t v = r * cols + c;
            if (c + 1 < cols) {
                edges.push_back({v, v + 1});
            }
            if (r + 1 < rows) {
                edges.push_back({v, v + cols});
            }
        }
    }
    return Graph(rows * cols, edges);
}

inline std::size_t degree(const Graph &g, std::size_t v) {
    if (v >= g.n_vertices()) {
        throw std::invalid_argument(
            "vertex " + std::to_string(v + 1) + " outside 1.." + std::to_string(g.n_vertices()));
    }
    std::size_t count = 0;
    const auto row = g.adjacency().row(static_cast<Eigen::Index>(v));
    for (Eigen::Index j = 0; j < row.size(); ++j) {
        if (row(j) != 0.0) {
            ++count;
        }
    }
    return count;
}

/// Reads the edge-list text format: one "i j [weight]" per line, 1-based,
/// weight defaulting to 1. Blank lines and lines starting with '#' are
/// skipped. Without an explicit vertex count the largest index is used.
inline Graph parse_edge_list(std::istream &in, std::optional<std::size_t> n_vertices = std::nullopt) {
    std::vector<Edge> edges;
    std::size_t max_index = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        for (std::string tok; fields >> tok;) {
            tokens.push_back(tok);
        }
        const auto fail = [&](const std::string &why) {
            return std::invalid_argument("edge list line " + std::to_string(line_no) + ": " + why);
        };
        if (tokens.size() < 2 || tokens.size() > 3) {
            throw fail("expected 'i j [weight]'");
        }
        long long idx[2];
        for (int k = 0; k < 2; ++k) {
            std::size_t used = 0;
            try {
                idx[k] = std::stoll(tokens[k], &used);
            } catch (const std::exception &) {
                throw fail("invalid vertex '" + tokens[k] + "'");
            }
            if (used != tokens[k].size() || idx[k] < 1) {
                throw fail("vertex must be a positive integer, got '" + tokens[k] + "'");
            }
        }
        double weight = 1.0;
        if (tokens.size() == 3) {
            std::size_t used = 0;
            try {
                weight = std::stod(tokens[2], &used);
            } catch (const std::exception &) {
                throw fail("invalid weight '" + tokens[2] + "'");
            }
            if (used != tokens[2].size()) {
                throw fail("invalid weight '" + tokens[2] + "'");
            }
        }
        const auto i = static_cast<std::size_t>(idx[0]);
        const auto j = static_cast<std::size_t>(idx[1]);
        max_index = std::max({max_index, i, j});
        edges.push_back({i - 1, j - 1, weight});
    }
    return Graph(n_vertices.value_or(max_index), edges);
}

inline Graph parse_edge_list(const std::string &text, std::optional<std::size_t> n_vertices = std::nullopt) {
    std::istringstream in(text);
    return parse_edge_list(in, n_vertices);
}

}  // namespace cvcluster
