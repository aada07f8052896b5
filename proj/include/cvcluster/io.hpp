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

// Serialization of states, nullifier tables and CCR results.
//
// Number formatting contract: every real is written with 12 significant
// digits ("%.12g", negative zero written as 0). Reading a file back and
// writing it again reproduces it byte for byte, and each value read equals
// the 12-digit rounding of the value that was written.

#include "cvcluster/ccr.hpp"
#include "cvcluster/cluster.hpp"
#include "cvcluster/gaussian.hpp"
#include "cvcluster/graph.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cvcluster::io {

using Json = nlohmann::ordered_json;

inline std::string format_number(double value) {
    if (value == 0.0) {
        return "0";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

/// `value` rounded to the 12 significant digits it is serialized with.
inline double rounded(double value) {
    return std::stod(format_number(value));
}

inline Json to_json(const Matrix &m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(rounded(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json to_json(const Vector &v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(rounded(v(i)));
    }
    return out;
}

inline Matrix matrix_from_json(const Json &rows) {
    if (!rows.is_array() || rows.empty()) {
        throw std::invalid_argument("expected a non-empty array of rows");
    }
    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    const auto n_cols = static_cast<Eigen::Index>(rows.front().size());
    Matrix m(n_rows, n_cols);
    for (Eigen::Index i = 0; i < n_rows; ++i) {
        const Json &row = rows.at(static_cast<std::size_t>(i));
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_cols) {
            throw std::invalid_argument("ragged matrix in JSON");
        }
        for (Eigen::Index j = 0; j < n_cols; ++j) {
            m(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
        }
    }
    return m;
}

/// Everything a command may emit. Sections left empty are omitted from the
/// JSON payload rather than written as null.
struct Document {
    std::size_t modes = 0;
    QuadratureOrdering ordering = QuadratureOrdering::Block;
    std::optional<SqueezingSpec> squeezing;
    std::optional<Matrix> adjacency;
    std::optional<Matrix> covariance;
    std::optional<Vector> nullifier_variances;
    std::optional<CcrReport> ccr;
};

inline Json to_json(const Document &doc) {
    Json out;
    out["modes"] = doc.modes;
    out["ordering"] = std::string(to_string(doc.ordering));
    if (doc.squeezing) {
        out["squeezing_db"] = rounded(doc.squeezing->db());
        out["r"] = rounded(doc.squeezing->r());
    }
    if (doc.adjacency) {
        out["adjacency"] = to_json(*doc.adjacency);
    }
    if (doc.covariance) {
        out["covariance"] = to_json(*doc.covariance);
    }
    if (doc.nullifier_variances) {
        out["nullifier_variances"] = to_json(*doc.nullifier_variances);
    }
    if (doc.ccr) {
        Json c;
        c["mode"] = std::string(to_string(doc.ccr->mode));
        c["value"] = rounded(doc.ccr->value);
        c["numerator"] = rounded(doc.ccr->numerator);
        c["denominator"] = rounded(doc.ccr->denominator);
        if (doc.ccr->weighted_numerator) {
            c["weighted_numerator"] = rounded(*doc.ccr->weighted_numerator);
        }
        c["regime"] = std::string(to_string(doc.ccr->regime));
        out["ccr"] = std::move(c);
    }
    return out;
}

inline std::string dump(const Json &j) {
    return j.dump(2) + "\n";
}

/// Inverse of to_json for the fields that carry numbers; squeezing is
/// rebuilt from "r".
inline Document document_from_json(const Json &j) {
    Document doc;
    doc.modes = j.at("modes").get<std::size_t>();
    doc.ordering = parse_ordering(j.at("ordering").get<std::string>());
    if (j.contains("r")) {
        doc.squeezing = SqueezingSpec::from_r(j.at("r").get<double>());
    }
    if (j.contains("adjacency")) {
        doc.adjacency = matrix_from_json(j.at("adjacency"));
    }
    if (j.contains("covariance")) {
        doc.covariance = matrix_from_json(j.at("covariance"));
    }
    if (j.contains("nullifier_variances")) {
        const auto &arr = j.at("nullifier_variances");
        Vector v(static_cast<Eigen::Index>(arr.size()));
        for (std::size_t i = 0; i < arr.size(); ++i) {
            v(static_cast<Eigen::Index>(i)) = arr.at(i).get<double>();
        }
        doc.nullifier_variances = v;
    }
    return doc;
}

// ---------------------------------------------------------------------------
// CSV

using Metadata = std::vector<std::pair<std::string, std::string>>;

inline std::string matrix_inline(const Matrix &m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (i > 0) {
            out += ';';
        }
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out += ' ';
            }
            out += format_number(m(i, j));
        }
    }
    return out;
}

inline void write_metadata(std::ostream &out, const Metadata &meta) {
    for (const auto &[key, value] : meta) {
        out << "# " << key << "=" << value << "\n";
    }
}

inline void write_matrix_csv(std::ostream &out, const Metadata &meta, const Matrix &m) {
    write_metadata(out, meta);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out << ',';
            }
            out << format_number(m(i, j));
        }
        out << "\n";
    }
}

/// Header row followed by numeric rows.
inline void write_table_csv(
    std::ostream &out, const Metadata &meta, const std::vector<std::string> &columns,
    const std::vector<std::vector<std::string>> &rows) {
    write_metadata(out, meta);
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out << (c > 0 ? "," : "") << columns[c];
    }
    out << "\n";
    for (const auto &row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c > 0 ? "," : "") << row[c];
        }
        out << "\n";
    }
}

// ---------------------------------------------------------------------------
// PGM heatmap

/// floor(255 * |V_ij| / max|V|), all zeros for a zero matrix.
inline std::vector<std::vector<int>> heatmap_pixels(const Matrix &m) {
    const double peak = max_abs(m);
    std::vector<std::vector<int>> pixels(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        auto &row = pixels[static_cast<std::size_t>(i)];
        row.resize(static_cast<std::size_t>(m.cols()), 0);
        if (peak > 0.0) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                row[static_cast<std::size_t>(j)] = static_cast<int>(std::floor(255.0 * std::abs(m(i, j)) / peak));
            }
        }
    }
    return pixels;
}

/// Plain (P2) greymap, maxval 255, one image row per matrix row.
inline void write_pgm(std::ostream &out, const Matrix &m) {
    out << "P2\n" << m.cols() << " " << m.rows() << "\n255\n";
    for (const auto &row : heatmap_pixels(m)) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            out << (j > 0 ? " " : "") << row[j];
        }
        out << "\n";
    }
}

}  // namespace cvcluster::io
