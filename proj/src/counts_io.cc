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

#include "lgweak/counts_io.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lgweak {

namespace {

std::filesystem::path with_suffix(const std::filesystem::path &stem, const char *suffix) {
    std::filesystem::path p = stem;
    p += suffix;
    return p;
}

std::string slurp(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot open " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void dump(const std::filesystem::path &path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::invalid_argument("cannot write " + path.string());
    }
    out << text;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

std::string counts_to_csv(const CountsGrid &counts) {
    std::string out;
    for (int j = 0; j < counts.grid.n_y; j++) {
        for (int i = 0; i < counts.grid.n_x; i++) {
            if (i) {
                out += ',';
            }
            out += std::to_string(counts.at(i, j));
        }
        out += '\n';
    }
    return out;
}

std::vector<int64_t> counts_from_csv(std::string_view csv, const DetectorGrid &grid) {
    std::vector<int64_t> cells;
    cells.reserve(grid.size());
    int rows = 0;
    while (!csv.empty()) {
        size_t eol = csv.find('\n');
        std::string_view line = trim(csv.substr(0, eol));
        csv = eol == std::string_view::npos ? std::string_view{} : csv.substr(eol + 1);
        if (line.empty()) {
            continue;
        }
        int cols = 0;
        while (true) {
            size_t comma = line.find(',');
            std::string_view cell = trim(line.substr(0, comma));
            int64_t v = 0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size() || v < 0) {
                throw std::invalid_argument("bad counts cell '" + std::string(cell) + "' in row " + std::to_string(rows));
            }
            cells.push_back(v);
            cols++;
            if (comma == std::string_view::npos) {
                break;
            }
            line = line.substr(comma + 1);
        }
        if (cols != grid.n_x) {
            throw std::invalid_argument(
                "counts row " + std::to_string(rows) + " has " + std::to_string(cols) + " columns, expected " +
                std::to_string(grid.n_x));
        }
        rows++;
    }
    if (rows != grid.n_y) {
        throw std::invalid_argument(
            "counts file has " + std::to_string(rows) + " rows, expected " + std::to_string(grid.n_y));
    }
    return cells;
}

nlohmann::json frame_header(const Frame &frame) {
    const CountsGrid &c = frame.counts;
    const FrameMetadata &m = frame.meta;
    nlohmann::json j;
    j["format"] = kFrameFormat;
    j["seed"] = c.seed;
    j["photons"] = c.photons;
    j["dark_counts"] = c.dark_counts;
    j["dark_rate"] = m.dark_rate;
    j["grid"] = {
        {"n_x", c.grid.n_x},
        {"n_y", c.grid.n_y},
        {"pitch", c.grid.pitch},
        {"origin_x", c.grid.origin_x},
        {"origin_y", c.grid.origin_y},
        {"rows", "y_ascending"},
        {"columns", "x_ascending"},
    };
    j["angles_pi"] = {{"alpha", m.alpha_pi}, {"gamma", m.gamma_pi}, {"delta", m.delta_pi}};
    j["post_selection"] = m.post_selection;
    j["g_x"] = m.g_x;
    j["g_y"] = m.g_y;
    j["sigma"] = m.sigma;
    return j;
}

Frame frame_from_parts(const nlohmann::json &header, std::string_view csv) {
    Frame f;
    try {
        const auto &g = header.at("grid");
        f.counts.grid.n_x = g.at("n_x").get<int>();
        f.counts.grid.n_y = g.at("n_y").get<int>();
        f.counts.grid.pitch = g.at("pitch").get<double>();
        f.counts.grid.origin_x = g.value("origin_x", 0.0);
        f.counts.grid.origin_y = g.value("origin_y", 0.0);
        f.counts.photons = header.at("photons").get<int64_t>();
        f.counts.dark_counts = header.value("dark_counts", int64_t{0});
        f.counts.seed = header.value("seed", uint64_t{0});
        if (header.contains("angles_pi")) {
            const auto &a = header["angles_pi"];
            f.meta.alpha_pi = a.value("alpha", 0.0);
            f.meta.gamma_pi = a.value("gamma", 0.0);
            f.meta.delta_pi = a.value("delta", 0.0);
        }
        f.meta.post_selection = header.value("post_selection", std::string{});
        f.meta.g_x = header.value("g_x", 0.0);
        f.meta.g_y = header.value("g_y", 0.0);
        f.meta.sigma = header.value("sigma", 1.0);
        f.meta.dark_rate = header.value("dark_rate", 0.0);
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("malformed frame header: ") + e.what());
    }
    f.counts.grid.validate();
    f.counts.counts = counts_from_csv(csv, f.counts.grid);
    if (f.counts.total() != f.counts.photons + f.counts.dark_counts) {
        std::stringstream ss;
        ss << "frame total " << f.counts.total() << " != photons " << f.counts.photons << " + dark_counts "
           << f.counts.dark_counts;
        throw std::invalid_argument(ss.str());
    }
    return f;
}

void write_frame(const std::filesystem::path &stem, const Frame &frame) {
    dump(with_suffix(stem, ".csv"), counts_to_csv(frame.counts));
    dump(with_suffix(stem, ".json"), frame_header(frame).dump(2) + "\n");
}

Frame read_frame(const std::filesystem::path &stem) {
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(slurp(with_suffix(stem, ".json")));
    } catch (const nlohmann::json::parse_error &e) {
        throw std::invalid_argument(std::string("cannot parse frame header: ") + e.what());
    }
    return frame_from_parts(header, slurp(with_suffix(stem, ".csv")));
}

}  // namespace lgweak
