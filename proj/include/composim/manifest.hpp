// Copyright 2026 The composim Authors
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

// Run manifests written next to every CLI output.

#pragma once

#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <json.hpp>

#include "composim/common.hpp"

namespace composim {

/// 64-bit FNV-1a.
inline uint64_t fnv1a64(const std::string &bytes) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string file_digest(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorCode::io_error, "cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return hex64(fnv1a64(bytes));
}

struct RunManifest {
    std::string command;
    nlohmann::json params = nlohmann::json::object();  // every resolved parameter, seeds included
    std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
    std::vector<std::string> outputs;
    double wall_clock_s = 0;

    void add_input(const std::string &path) { inputs.push_back({path, file_digest(path)}); }

    nlohmann::json to_json() const {
        nlohmann::json in = nlohmann::json::array();
        for (const auto &[p, d] : inputs) in.push_back({{"path", p}, {"fnv1a64", d}});
        return {{"command", command},   {"tool_version", kVersion}, {"params", params},
                {"inputs", in},         {"outputs", outputs},       {"wall_clock_s", wall_clock_s}};
    }

    /// Same command, parameters and input digests. Wall clock and output
    /// names are ignored.
    bool same_run(const nlohmann::json &other) const {
        nlohmann::json me = to_json();
        return other.value("command", "") == me["command"] && other.value("params", nlohmann::json()) == me["params"] &&
               other.value("inputs", nlohmann::json()) == me["inputs"];
    }
};

inline std::string manifest_path(const std::string &out) { return out + ".manifest.json"; }

}  // namespace composim
