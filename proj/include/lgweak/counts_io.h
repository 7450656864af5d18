// Copyright 2026 The lgweak Authors
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

#ifndef LGWEAK_COUNTS_IO_H
#define LGWEAK_COUNTS_IO_H

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "lgweak/pointer.h"

namespace lgweak {

/// Acquisition context stored next to a counts frame.
struct FrameMetadata {
    std::string post_selection;  ///< "A", "D" or "Dperp" for simulated runs
    double alpha_pi = 0;
    double gamma_pi = 0;
    double delta_pi = 0;
    double g_x = 0;
    double g_y = 0;
    double sigma = 1;
    double dark_rate = 0;
};

struct Frame {
    CountsGrid counts;
    FrameMetadata meta;
};

inline constexpr std::string_view kFrameFormat = "lgweak-counts/1";

/// n_y lines of n_x comma-separated integers. Line j holds pixel row j,
/// rows ordered by increasing y, columns by increasing x.
std::string counts_to_csv(const CountsGrid &counts);

/// Parses the CSV body into `grid`'s shape. Throws std::invalid_argument on
/// shape mismatch, negative or non-integer cells.
std::vector<int64_t> counts_from_csv(std::string_view csv, const DetectorGrid &grid);

nlohmann::json frame_header(const Frame &frame);

/// Rebuilds a frame from its header and CSV body. The header's photons and
/// dark_counts must add up to the CSV total; dark_counts and seed may be
/// omitted.
Frame frame_from_parts(const nlohmann::json &header, std::string_view csv);

/// Writes <stem>.csv and <stem>.json.
void write_frame(const std::filesystem::path &stem, const Frame &frame);

Frame read_frame(const std::filesystem::path &stem);

}  // namespace lgweak

#endif
