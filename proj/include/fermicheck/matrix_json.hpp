// Copyright 2026 The fermicheck Authors
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

// Matrix <-> JSON:
//   {"rows": n, "cols": m, "field": "real"|"complex", "data": [[re, im], ...]}
// with data in row-major order. Doubles are emitted losslessly, so a
// write/read cycle reproduces every entry bit for bit.

#include <string>
#include <vector>

#include "json.hpp"

#include "fermicheck/linops.hpp"

namespace fermicheck {

inline nlohmann::json matrix_to_json(const Matrix &m) {
    nlohmann::json data = nlohmann::json::array();
    for (const auto &z : m.entries()) {
        data.push_back({z.real(), z.imag()});
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"field", field_name(m.field())}, {"data", std::move(data)}};
}

inline Matrix matrix_from_json(const nlohmann::json &j) {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const auto field_str = j.at("field").get<std::string>();
    Field field;
    if (field_str == "real") {
        field = Field::Real;
    } else if (field_str == "complex") {
        field = Field::Complex;
    } else {
        throw FieldError("matrix_from_json: unknown field '" + field_str + "'");
    }
    const auto &data = j.at("data");
    if (!data.is_array() || data.size() != rows * cols) {
        throw DimensionError("matrix_from_json: data length does not match rows*cols");
    }
    std::vector<cplx> entries;
    entries.reserve(data.size());
    for (const auto &pair : data) {
        if (!pair.is_array() || pair.size() != 2) {
            throw std::invalid_argument("matrix_from_json: each entry must be [re, im]");
        }
        entries.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return Matrix(rows, cols, field, std::move(entries));
}

inline std::string matrix_to_json_string(const Matrix &m) { return matrix_to_json(m).dump(); }

inline Matrix matrix_from_json_string(const std::string &s) { return matrix_from_json(nlohmann::json::parse(s)); }

}  // namespace fermicheck
