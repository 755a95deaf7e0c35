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

// Single-iteration error vs duration, and fitted log-log slopes.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "composim/costing.hpp"

namespace composim {

struct ScalingSeries {
    std::string name;
    ChannelKind kind = ChannelKind::trotter;
    int inner_order = 1;
    MeasureKind measure = MeasureKind::trace_distance;
    double expected = 0;  // slope
    double tol = 0.1;
    // Composite only: both half-window slopes must lie in [lo - tol, hi + tol].
    bool range_check = false;
    double lo = 0, hi = 0;

    std::vector<double> t, err;
    double slope = 0;
    double slope_small = 0, slope_large = 0;
    size_t dropped = 0;  // leading points below the precision floor
    bool pass = false;

    nlohmann::json to_json() const {
        nlohmann::json j = {{"name", name},      {"channel", channel_kind_name(kind)}, {"inner_order", inner_order},
                            {"measure", measure_name(measure)}, {"t", t}, {"error", err}, {"slope", slope},
                            {"dropped_below_floor", dropped}, {"tol", tol}, {"pass", pass}};
        if (range_check) {
            j["expected_range"] = {lo, hi};
            j["slope_small_t"] = slope_small;
            j["slope_large_t"] = slope_large;
        } else {
            j["expected"] = expected;
        }
        return j;
    }
};

struct ScalingReport {
    std::vector<ScalingSeries> series;
    bool pass = true;
};

/// Errors below these carry only rounding noise. Pure-state infidelity keeps
/// relative precision far lower than anything computed from a density matrix.
inline double precision_floor(bool pure_path, MeasureKind m) {
    if (m == MeasureKind::trace_distance) return 1e-12;
    return pure_path ? 1e-26 : 1e-13;
}

/// One iteration (r = 1, one QDrift sample) of each channel against the exact
/// evolution of psi0 at every grid time. Points under the precision floor are
/// dropped from the small-t end; at least three must survive.
inline void run_series(const HamiltonianSum &h, const Partition &composite_part, const std::vector<double> &grid, uint64_t state_seed,
                       ScalingSeries &s) {
    ChannelSpec spec;
    spec.kind = s.kind;
    spec.inner_order = s.inner_order;
    spec.nb = 1;
    Partition p = s.kind == ChannelKind::qdrift ? Partition::all_qdrift(h) : s.kind == ChannelKind::trotter ? Partition::all_trotter(h) : composite_part;
    auto eng = std::make_shared<const ChannelEngine>(h, p, spec);
    auto ex = std::make_shared<const ExactEvolver>(h);
    const Vec psi0 = random_state(h.dim(), state_seed);
    const double floor = precision_floor(eng->deterministic(), s.measure);
    s.t.clear();
    s.err.clear();
    s.dropped = 0;
    for (double t : grid) {
        double e = ErrorEvaluator(eng, ex, psi0, t, ErrorMeasure{s.measure})(1);
        if (s.t.empty() && e < floor) {
            s.dropped++;
            continue;
        }
        s.t.push_back(t);
        s.err.push_back(e);
    }
    if (s.t.size() < 3) {
        s.pass = false;
        return;
    }
    s.slope = loglog_slope(s.t, s.err);
    if (!s.range_check) {
        s.pass = std::abs(s.slope - s.expected) <= s.tol;
        return;
    }
    const size_t half = s.t.size() / 2;
    s.slope_small = loglog_slope({s.t.begin(), s.t.begin() + half + 1}, {s.err.begin(), s.err.begin() + half + 1});
    s.slope_large = loglog_slope({s.t.begin() + half, s.t.end()}, {s.err.begin() + half, s.err.end()});
    auto in = [&](double v) { return v >= s.lo - s.tol && v <= s.hi + s.tol; };
    s.pass = in(s.slope_small) && in(s.slope_large);
}

/// The standard suite: QDrift and Trotter slopes for both measures, plus the
/// composite (inner order 2) trace distance, which should sit between the
/// QDrift and second-order slopes.
inline ScalingReport scaling_check(const HamiltonianSum &h, double t_min, double t_max, int points, uint64_t state_seed) {
    require(points >= 3, ErrorCode::invalid_argument, "scaling check needs at least 3 points");
    auto grid = log_grid(t_min, t_max, points);
    ScalingReport rep;
    auto add = [&](const char *name, ChannelKind k, int order, MeasureKind m, double expected, double tol) {
        ScalingSeries s;
        s.name = name;
        s.kind = k;
        s.inner_order = order;
        s.measure = m;
        s.expected = expected;
        s.tol = tol;
        rep.series.push_back(s);
    };
    add("qdrift_trace_distance", ChannelKind::qdrift, 1, MeasureKind::trace_distance, 2.0, 0.1);
    add("trotter1_trace_distance", ChannelKind::trotter, 1, MeasureKind::trace_distance, 2.0, 0.1);
    add("trotter2_trace_distance", ChannelKind::trotter, 2, MeasureKind::trace_distance, 3.0, 0.1);
    add("qdrift_infidelity", ChannelKind::qdrift, 1, MeasureKind::infidelity_exact, 2.0, 0.1);
    add("trotter2_infidelity", ChannelKind::trotter, 2, MeasureKind::infidelity_exact, 6.0, 0.3);
    Partition xp = h.size() >= 2 ? heuristic_partition(h) : Partition::all_trotter(h);
    if (!xp.a_ids.empty() && !xp.b_ids.empty()) {
        add("composite2_trace_distance", ChannelKind::composite, 2, MeasureKind::trace_distance, 0, 0.1);
        auto &s = rep.series.back();
        s.range_check = true;
        s.lo = 2.0;
        s.hi = 3.0;
    }
    for (auto &s : rep.series) {
        run_series(h, xp, grid, state_seed, s);
        rep.pass = rep.pass && s.pass;
    }
    return rep;
}

}  // namespace composim
