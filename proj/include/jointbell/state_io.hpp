// Copyright 2026 The jointbell Authors
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

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "jointbell/counts.hpp"
#include "jointbell/state.hpp"

namespace jointbell {

/// Reads a 4x4 density matrix: four non-comment rows, each holding either
/// four real entries or eight numbers read as (re, im) pairs. Entries are
/// separated by whitespace or commas; `#` starts a comment.
inline Matrix4 read_density_matrix(std::istream &in) {
    Matrix4 m;
    std::string raw;
    std::size_t line_no = 0, row = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        for (char &c : raw) {
            if (c == ',') c = ' ';
        }
        std::istringstream fields(raw);
        std::vector<double> nums;
        std::string tok;
        while (fields >> tok) nums.push_back(detail::parse_double(tok, line_no, "matrix entry"));
        if (nums.empty()) continue;
        if (row >= 4) throw ParseError(line_no, "density matrix has more than 4 rows");
        if (nums.size() == 4) {
            for (std::size_t j = 0; j < 4; ++j) m(row, j) = nums[j];
        } else if (nums.size() == 8) {
            for (std::size_t j = 0; j < 4; ++j) m(row, j) = Complex(nums[2 * j], nums[2 * j + 1]);
        } else {
            throw ParseError(line_no, "density matrix row needs 4 real or 8 (re, im) numbers, got " +
                                          std::to_string(nums.size()));
        }
        ++row;
    }
    if (row != 4) throw ParseError(0, "density matrix needs 4 rows, got " + std::to_string(row));
    return m;
}

/// `singlet`, `werner:<v>`, or a path to a density-matrix file.
inline TwoQubitState load_state(const std::string &spec) {
    if (spec == "singlet") return singlet_state();
    if (spec.starts_with("werner:")) {
        const std::string arg = spec.substr(7);
        double v = 0.0;
        try {
            v = detail::parse_double(arg, 0, "werner visibility");
        } catch (const ParseError &) {
            throw std::invalid_argument("bad state spec '" + spec + "': werner visibility is not a number");
        }
        return werner_state(v);
    }
    std::ifstream file(spec);
    if (!file) {
        throw std::invalid_argument("bad state spec '" + spec + "': expected singlet, werner:<v> or a readable matrix file");
    }
    return TwoQubitState(read_density_matrix(file));
}

}  // namespace jointbell
