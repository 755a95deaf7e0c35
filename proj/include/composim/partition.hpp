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

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "composim/pauli.hpp"

namespace composim {

enum class Provenance { manual, chop, heuristic, optimized };

inline const char *provenance_name(Provenance p) {
    switch (p) {
        case Provenance::manual: return "manual";
        case Provenance::chop: return "chop";
        case Provenance::heuristic: return "heuristic";
        case Provenance::optimized: return "optimized";
    }
    return "?";
}

/// Trotter set A and QDrift set B, as sorted term ids.
struct Partition {
    std::vector<int> a_ids;
    std::vector<int> b_ids;
    double omega_c = 0;
    Provenance provenance = Provenance::manual;

    static Partition all_trotter(const HamiltonianSum &h) {
        Partition p;
        p.a_ids.resize(h.size());
        std::iota(p.a_ids.begin(), p.a_ids.end(), 0);
        p.omega_c = 0;
        return p;
    }

    static Partition all_qdrift(const HamiltonianSum &h) {
        Partition p;
        p.b_ids.resize(h.size());
        std::iota(p.b_ids.begin(), p.b_ids.end(), 0);
        p.omega_c = std::nextafter(h.max_coeff(), INFINITY);
        return p;
    }

    static Partition manual(std::vector<int> a, std::vector<int> b) {
        Partition p;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        p.a_ids = std::move(a);
        p.b_ids = std::move(b);
        return p;
    }

    /// Throws unless A and B are disjoint and together cover every term.
    void validate(const HamiltonianSum &h) const {
        std::vector<int> seen(h.size(), 0);
        for (const auto *ids : {&a_ids, &b_ids}) {
            for (int i : *ids) {
                require(i >= 0 && static_cast<size_t>(i) < h.size(), ErrorCode::invalid_argument,
                        "partition references term " + std::to_string(i) + " outside the Hamiltonian");
                require(seen[i]++ == 0, ErrorCode::invalid_argument, "term " + std::to_string(i) + " appears twice in the partition");
            }
        }
        for (size_t i = 0; i < seen.size(); i++) {
            require(seen[i] == 1, ErrorCode::invalid_argument, "term " + std::to_string(i) + " missing from the partition");
        }
    }

    double lambda_a(const HamiltonianSum &h) const {
        double s = 0;
        for (int i : a_ids) s += h.terms[i].coeff;
        return s;
    }
    double lambda_b(const HamiltonianSum &h) const {
        double s = 0;
        for (int i : b_ids) s += h.terms[i].coeff;
        return s;
    }
};

/// Terms with h_i >= omega_c go to A, the rest to B.
inline Partition chop(const HamiltonianSum &h, double omega_c) {
    require(!h.empty(), ErrorCode::empty_hamiltonian, "chop on an empty Hamiltonian");
    require(omega_c >= 0 && omega_c <= std::nextafter(h.max_coeff(), INFINITY), ErrorCode::invalid_argument,
            "omega_c must lie in [0, max h_i]");
    Partition p;
    for (size_t i = 0; i < h.size(); i++) (h.terms[i].coeff >= omega_c ? p.a_ids : p.b_ids).push_back(static_cast<int>(i));
    p.omega_c = omega_c;
    p.provenance = Provenance::chop;
    return p;
}

struct HeuristicOmega {
    double omega_c = 0;
    bool degenerate = false;
    size_t split = 0;  // number of terms kept in A
};

/// Largest gap in the sorted norms, chopped so that at least half of the
/// terms land in B. Walking the ascending list, jb counts the terms below the
/// cut and runs from ceil(L/2) upward; ties keep the first (smallest) jb.
/// omega_c sits at the upper value of the gap.
inline HeuristicOmega heuristic_omega(const HamiltonianSum &h) {
    require(h.size() >= 2, ErrorCode::invalid_argument, "heuristic_omega needs at least 2 terms");
    std::vector<double> v;
    for (const auto &t : h.terms) v.push_back(t.coeff);
    std::sort(v.begin(), v.end(), std::greater<>());
    const size_t L = v.size();
    HeuristicOmega out;
    double best = -1;
    // Split j puts descending entries [0, j) in A and [j, L) in B.
    for (size_t jb = (L + 1) / 2; jb < L; jb++) {
        const size_t j = L - jb;
        double gap = v[j - 1] - v[j];
        if (gap > best) {
            best = gap;
            out.split = j;
        }
    }
    if (best <= 0) {
        out.omega_c = v.front();
        out.degenerate = true;
        out.split = 0;
        return out;
    }
    out.omega_c = v[out.split - 1];
    return out;
}

inline Partition heuristic_partition(const HamiltonianSum &h) {
    HeuristicOmega w = heuristic_omega(h);
    Partition p = chop(h, w.omega_c);
    p.provenance = Provenance::heuristic;
    return p;
}

/// Samples used when nothing is optimized: max(1, round(L / 5)).
inline int default_nb(const HamiltonianSum &h) {
    return std::max(1, static_cast<int>(std::lround(0.2 * static_cast<double>(h.size()))));
}

/// Distinct chop thresholds worth trying: 0, every midpoint between
/// consecutive distinct norms, and just above the maximum (all-B).
inline std::vector<double> omega_candidates(const HamiltonianSum &h) {
    std::vector<double> v;
    for (const auto &t : h.terms) v.push_back(t.coeff);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    std::vector<double> out{0.0};
    for (size_t i = 0; i + 1 < v.size(); i++) out.push_back(0.5 * (v[i] + v[i + 1]));
    out.push_back(std::nextafter(v.back(), INFINITY));
    return out;
}

}  // namespace composim
