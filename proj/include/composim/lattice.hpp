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

// Block decomposition of 1D local Hamiltonians,
//     exp(-iHt) ~ U_{B1} U_{Y1}^dagger U_{B2} U_{Y2}^dagger ... U_{Bm},
// and channels built block by block.

#pragma once

#include <algorithm>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "composim/costing.hpp"
#include "composim/hamiltonians.hpp"

namespace composim {

struct Block {
    std::vector<int> sites;  // sorted, 0-based
    bool reversed = false;
};

/// Blocks in application order. Forward blocks alternate with reversed
/// overlap blocks: B1, Y1, B2, Y2, ..., Bm, where Yi = Bi ∩ B(i+1).
struct Blocking {
    std::vector<Block> blocks;
    int overlap = 0;
    int dimension = 1;

    /// m forward blocks of near-equal size on an n-site chain, neighbours
    /// sharing exactly l sites.
    static Blocking chain(int n_sites, int m, int l) {
        require(l >= 1, ErrorCode::invalid_argument, "block overlap must be >= 1");
        require(m >= 1, ErrorCode::invalid_argument, "need at least one block");
        Blocking b;
        b.overlap = l;
        if (m == 1) {
            Block all;
            for (int i = 0; i < n_sites; i++) all.sites.push_back(i);
            b.blocks.push_back(all);
            return b;
        }
        const int total = n_sites + (m - 1) * l;
        std::vector<int> size(m, total / m);
        for (int i = 0; i < total % m; i++) size[i]++;
        int start = 0;
        std::vector<Block> fwd;
        for (int i = 0; i < m; i++) {
            Block blk;
            for (int s = start; s < start + size[i]; s++) blk.sites.push_back(s);
            fwd.push_back(blk);
            start += size[i] - l;
        }
        for (int i = 0; i < m; i++) {
            b.blocks.push_back(fwd[i]);
            if (i + 1 < m) {
                Block y;
                y.reversed = true;
                for (int s = fwd[i + 1].sites.front(); s <= fwd[i].sites.back(); s++) y.sites.push_back(s);
                b.blocks.push_back(y);
            }
        }
        b.validate(n_sites);
        return b;
    }

    /// Parses "1-3,3,3-5" (1-based, inclusive ranges). Entries at odd positions
    /// are the reversed overlap blocks.
    static Blocking parse(const std::string &spec, int n_sites) {
        Blocking b;
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) {
            Block blk;
            int lo, hi;
            auto dash = item.find('-');
            try {
                if (dash == std::string::npos) {
                    lo = hi = std::stoi(item);
                } else {
                    lo = std::stoi(item.substr(0, dash));
                    hi = std::stoi(item.substr(dash + 1));
                }
            } catch (const std::logic_error &) {
                throw Error(ErrorCode::parse_error, "bad block range '" + item + "'");
            }
            require(lo >= 1 && hi >= lo, ErrorCode::parse_error, "bad block range '" + item + "'");
            for (int s = lo; s <= hi; s++) blk.sites.push_back(s - 1);
            blk.reversed = b.blocks.size() % 2 == 1;
            b.blocks.push_back(blk);
        }
        require(!b.blocks.empty() && b.blocks.size() % 2 == 1, ErrorCode::parse_error, "block list must have an odd number of entries");
        b.overlap = b.blocks.size() > 1 ? static_cast<int>(b.blocks[1].sites.size()) : 0;
        b.validate(n_sites);
        return b;
    }

    void validate(int n_sites) const {
        require(dimension == 1, ErrorCode::invalid_argument, "only 1D blockings are supported");
        std::set<int> cover;
        for (const auto &blk : blocks) {
            require(!blk.sites.empty(), ErrorCode::invalid_argument, "empty block");
            for (int s : blk.sites) {
                require(s >= 0 && s < n_sites, ErrorCode::invalid_argument, "block site outside the lattice");
                cover.insert(s);
            }
        }
        require(static_cast<int>(cover.size()) == n_sites, ErrorCode::invalid_argument, "blocks do not cover every site");
        for (size_t i = 1; i + 1 < blocks.size(); i += 2) {
            const auto &a = blocks[i - 1].sites, &y = blocks[i].sites, &c = blocks[i + 1].sites;
            std::vector<int> inter;
            std::set_intersection(a.begin(), a.end(), c.begin(), c.end(), std::back_inserter(inter));
            require(overlap >= 1, ErrorCode::invalid_argument, "block overlap must be >= 1");
            require(inter == y, ErrorCode::invalid_argument, "reversed block must equal the overlap of its neighbours");
            require(static_cast<int>(y.size()) == overlap, ErrorCode::invalid_argument, "every overlap must have the same width");
        }
    }

    std::string describe() const {
        std::string s;
        for (size_t i = 0; i < blocks.size(); i++) {
            if (i) s += ",";
            s += std::to_string(blocks[i].sites.front() + 1);
            if (blocks[i].sites.size() > 1) s += "-" + std::to_string(blocks[i].sites.back() + 1);
        }
        return s;
    }
};

/// Sites a term acts on non-trivially (qubit index = site index).
inline std::vector<int> term_support(const PauliTerm &t) {
    std::vector<int> s;
    for (int q = 0; q < t.n_qubits(); q++) {
        if (t.axes[q] != 'I') s.push_back(q);
    }
    return s;
}

struct BlockTerms {
    HamiltonianSum h;          // terms inside the block
    std::vector<int> term_ids;  // their ids in the full Hamiltonian
};

/// Every term goes to every block whose sites contain its support.
inline std::vector<BlockTerms> assign_terms(const HamiltonianSum &h, const LatticeSpec &lat, const Blocking &blocking) {
    require(lat.n_sites() == h.n_qubits, ErrorCode::dimension_mismatch, "lattice size does not match the qubit count");
    blocking.validate(lat.n_sites());
    std::vector<BlockTerms> out(blocking.blocks.size());
    for (auto &bt : out) bt.h.n_qubits = h.n_qubits;
    for (size_t i = 0; i < h.size(); i++) {
        auto sup = term_support(h.terms[i]);
        for (int u : sup) {
            for (int v : sup) {
                require(lat.dist(u, v) <= 1, ErrorCode::invalid_argument, "term " + std::to_string(i) + " ('" + h.terms[i].axes + "') is not local");
            }
        }
        for (size_t b = 0; b < blocking.blocks.size(); b++) {
            const auto &sites = blocking.blocks[b].sites;
            bool inside = std::all_of(sup.begin(), sup.end(), [&](int s) { return std::binary_search(sites.begin(), sites.end(), s); });
            if (inside) {
                out[b].h.terms.push_back(h.terms[i]);
                out[b].term_ids.push_back(static_cast<int>(i));
            }
        }
    }
    return out;
}

/// Per-block channel settings. `a_local` / `b_local` index the block's own
/// term list. An empty block Hamiltonian contributes nothing.
struct BlockSpec {
    Partition partition;
    int nb = 1;
    int inner_order = 1;
};

/// Local composite channel: for each block in order, that block's composite
/// channel iterated r times at slice t / r; reversed blocks run with -t.
class LocalChannel {
   public:
    LocalChannel(const HamiltonianSum &h, const LatticeSpec &lat, const Blocking &blocking, const std::vector<BlockSpec> &specs)
        : blocking_(blocking) {
        require(specs.size() == blocking.blocks.size(), ErrorCode::invalid_argument, "need one BlockSpec per block");
        auto parts = assign_terms(h, lat, blocking);
        for (size_t b = 0; b < parts.size(); b++) {
            if (parts[b].h.empty()) {
                engines_.push_back(nullptr);
                continue;
            }
            ChannelSpec s;
            s.kind = ChannelKind::composite;
            s.time_kind = TimeKind::real;
            s.inner_order = specs[b].inner_order;
            s.nb = specs[b].nb;
            engines_.push_back(std::make_shared<const ChannelEngine>(parts[b].h, specs[b].partition, s));
        }
    }

    bool deterministic() const {
        return std::all_of(engines_.begin(), engines_.end(), [](const auto &e) { return !e || e->deterministic(); });
    }

    long long gate_count(int r) const {
        long long g = 0;
        for (const auto &e : engines_) {
            if (e) g += e->gate_count(r);
        }
        return g;
    }

    Mat apply(const Mat &rho_in, double t, int r) const {
        Mat rho = rho_in;
        for (size_t b = 0; b < engines_.size(); b++) {
            if (engines_[b]) rho = engines_[b]->apply(rho, blocking_.blocks[b].reversed ? -t : t, r);
        }
        return rho;
    }

    Vec apply(const Vec &psi_in, double t, int r) const {
        Vec psi = psi_in;
        for (size_t b = 0; b < engines_.size(); b++) {
            if (engines_[b]) psi = engines_[b]->apply(psi, blocking_.blocks[b].reversed ? -t : t, r);
        }
        return psi;
    }

   private:
    Blocking blocking_;
    std::vector<std::shared_ptr<const ChannelEngine>> engines_;
};

/// Specs putting every block term into the Trotter set.
inline std::vector<BlockSpec> all_trotter_specs(const HamiltonianSum &h, const LatticeSpec &lat, const Blocking &blocking, int order = 1) {
    std::vector<BlockSpec> out;
    for (const auto &bt : assign_terms(h, lat, blocking)) {
        BlockSpec s;
        s.partition = Partition::all_trotter(bt.h);
        s.inner_order = order;
        out.push_back(s);
    }
    return out;
}

/// Per-block chop at omega_c with per-block sample counts.
inline std::vector<BlockSpec> chop_specs(const HamiltonianSum &h, const LatticeSpec &lat, const Blocking &blocking, double omega_c,
                                         const std::vector<int> &nbs, int order = 1) {
    require(nbs.size() == blocking.blocks.size(), ErrorCode::invalid_argument, "need one N_B per block");
    std::vector<BlockSpec> out;
    auto parts = assign_terms(h, lat, blocking);
    for (size_t b = 0; b < parts.size(); b++) {
        BlockSpec s;
        s.nb = nbs[b];
        s.inner_order = order;
        if (!parts[b].h.empty()) {
            double w = std::min(omega_c, std::nextafter(parts[b].h.max_coeff(), INFINITY));
            s.partition = chop(parts[b].h, w);
        }
        out.push_back(s);
    }
    return out;
}

/// Per-block heuristic partitions (see heuristic_omega). A block with a single
/// term keeps it in the Trotter set.
inline std::vector<BlockSpec> heuristic_specs(const HamiltonianSum &h, const LatticeSpec &lat, const Blocking &blocking,
                                              const std::vector<int> &nbs, int order = 1) {
    require(nbs.size() == blocking.blocks.size(), ErrorCode::invalid_argument, "need one N_B per block");
    std::vector<BlockSpec> out;
    auto parts = assign_terms(h, lat, blocking);
    for (size_t b = 0; b < parts.size(); b++) {
        BlockSpec s;
        s.nb = nbs[b];
        s.inner_order = order;
        if (parts[b].h.size() >= 2) {
            s.partition = heuristic_partition(parts[b].h);
        } else if (!parts[b].h.empty()) {
            s.partition = Partition::all_trotter(parts[b].h);
        }
        out.push_back(s);
    }
    return out;
}

/// Sum of per-block gate counts for r iterations.
inline long long local_gate_count(const HamiltonianSum &h, const LatticeSpec &lat, const Blocking &blocking, const std::vector<BlockSpec> &specs,
                                  int r) {
    require(blocking.overlap >= 1 || blocking.blocks.size() == 1, ErrorCode::invalid_argument, "block overlap must be >= 1");
    return LocalChannel(h, lat, blocking, specs).gate_count(r);
}

/// Error of the bare blocking (exact block evolutions) against exp(-iHt):
/// max pure-state trace distance over `trials` random inputs.
inline double lr_error_probe(const HamiltonianSum &h, const LatticeSpec &lat, const Blocking &blocking, double t, int trials = 8,
                             uint64_t seed = 0) {
    auto parts = assign_terms(h, lat, blocking);
    std::vector<Mat> us;
    for (size_t b = 0; b < parts.size(); b++) {
        if (parts[b].h.empty()) continue;
        us.push_back(hermitian_exp(dense(parts[b].h), blocking.blocks[b].reversed ? -t : t, TimeKind::real));
    }
    ExactEvolver ex(h);
    std::mt19937_64 seeder(seed);
    double best = 0;
    for (int k = 0; k < trials; k++) {
        Vec psi = random_state(h.dim(), seeder());
        Vec target = ex.apply(psi, t, TimeKind::real);
        Vec out = psi;
        for (const auto &u : us) out = u * out;
        best = std::max(best, trace_distance(target, out));
    }
    return best;
}

/// Minimal r for a local channel against the exact real-time evolution.
inline SearchResult find_min_r_local(const HamiltonianSum &h, const LocalChannel &ch, const ExactEvolver &ex, double t, double epsilon,
                                     uint64_t state_seed, int r_max = kDefaultRMax) {
    Vec psi0 = random_state(h.dim(), state_seed);
    Vec target = ex.apply(psi0, t, TimeKind::real);
    auto eps = [&](int r) {
        if (ch.deterministic()) return trace_distance(target, ch.apply(psi0, t, r));
        return trace_distance(ch.apply(pure_density(psi0), t, r), pure_density(target));
    };
    SearchResult res = search_min_r(eps, epsilon, r_max);
    res.gates = ch.gate_count(res.r);
    return res;
}

/// Minimal-r costs of a local channel over a duration grid. Grid points run
/// in parallel; each keeps its own input state and target.
inline CostCurve local_sweep(const HamiltonianSum &h, const LocalChannel &ch, const std::string &name, const std::vector<double> &grid,
                             double epsilon, uint64_t state_seed, int r_max, int threads) {
    for (size_t i = 1; i < grid.size(); i++) require(grid[i] > grid[i - 1], ErrorCode::invalid_argument, "grid must be strictly increasing");
    ExactEvolver ex(h);
    CostCurve curve;
    curve.channel = name;
    curve.epsilon = epsilon;
    curve.points.resize(grid.size());
    parallel_for(grid.size(), threads, [&](size_t i) {
        curve.points[i].duration = grid[i];
        curve.points[i].result = find_min_r_local(h, ch, ex, grid[i], epsilon, state_seed, r_max);
    });
    return curve;
}

}  // namespace composim
