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

// Black-box minimization of the composite gate count over (omega_c, N_B).

#pragma once

#include <limits>
#include <map>
#include <random>
#include <set>
#include <vector>

#include <json.hpp>

#include "composim/costing.hpp"

namespace composim {

enum class OptStrategy { random_search, grid_descent };

struct OptimizerBudget {
    int max_evaluations = 50;
    double omega_lo = 0;
    double omega_hi = std::numeric_limits<double>::infinity();
    int nb_min = 1;
    int nb_max = 64;
    uint64_t seed = 0;
    OptStrategy strategy = OptStrategy::random_search;
    int threads = 1;

    void validate() const {
        require(max_evaluations >= 1, ErrorCode::invalid_argument, "optimizer budget must be >= 1");
        require(nb_min >= 1 && nb_max >= nb_min, ErrorCode::invalid_argument, "bad N_B bounds");
        require(omega_hi >= omega_lo, ErrorCode::invalid_argument, "bad omega_c bounds");
    }
};

struct OptEvaluation {
    double omega_c = 0;
    int nb = 0;
    int la = 0;
    bool converged = false;
    bool pruned = false;  // stopped early: r cap implied by the incumbent was exceeded
    int r = 0;
    long long cost = 0;
    double epsilon = 0;

    nlohmann::json to_json() const {
        return {{"omega_c", omega_c}, {"Nb", nb}, {"L_A", la}, {"converged", converged}, {"pruned", pruned},
                {"r", r}, {"cost", cost}, {"epsilon", epsilon}};
    }
};

struct OptimizeResult {
    Partition partition;
    int nb = 0;
    int r = 0;
    long long cost = 0;
    double epsilon = 0;
    bool baseline_kept = false;
    std::vector<OptEvaluation> history;
};

/// Objective: exact minimal gate count at the template's duration and
/// epsilon. The first evaluation is always the heuristic baseline
/// (heuristic_omega, default_nb), so the result is never worse than it.
///
/// Candidates are evaluated in fixed batches of 8; inside a batch each search
/// is capped at the r that would tie the incumbent. A capped run can only hide
/// a candidate that would not have won, so the optimum does not depend on the
/// thread count.
inline OptimizeResult optimize_partition(const CostQuery &tmpl, const OptimizerBudget &budget) {
    budget.validate();
    const HamiltonianSum &h = tmpl.h;
    require(!h.empty(), ErrorCode::empty_hamiltonian, "optimize on an empty Hamiltonian");
    auto exact = std::make_shared<const ExactEvolver>(h);
    const Vec psi0 = random_state(h.dim(), tmpl.state_seed);

    // Search space.
    std::vector<double> omegas;
    for (double w : omega_candidates(h)) {
        if (w >= budget.omega_lo && w <= budget.omega_hi) omegas.push_back(w);
    }
    std::vector<int> nbs;
    for (int n = budget.nb_min; n <= budget.nb_max; n++) nbs.push_back(n);

    struct Key {
        size_t la;
        int nb;
        bool operator<(const Key &o) const { return la != o.la ? la < o.la : nb < o.nb; }
    };
    std::map<Key, size_t> done;  // key -> index in history
    OptimizeResult res;
    long long best_cost = std::numeric_limits<long long>::max();
    size_t best_idx = 0;

    auto partition_for = [&](double w) {
        Partition p = chop(h, std::min(w, std::nextafter(h.max_coeff(), INFINITY)));
        p.provenance = Provenance::optimized;
        return p;
    };
    auto key_for = [&](const Partition &p, int nb) { return Key{p.a_ids.size(), p.b_ids.empty() ? 0 : nb}; };

    auto run_batch = [&](const std::vector<std::pair<double, int>> &batch) {
        std::vector<OptEvaluation> evals(batch.size());
        const long long cap_cost = best_cost;
        parallel_for(batch.size(), budget.threads, [&](size_t i) {
            Partition p = partition_for(batch[i].first);
            ChannelSpec spec = tmpl.spec;
            spec.kind = ChannelKind::composite;
            spec.nb = batch[i].second;
            auto eng = std::make_shared<const ChannelEngine>(h, p, spec);
            long long per = eng->gate_count(1);
            int r_cap = tmpl.r_max;
            if (cap_cost != std::numeric_limits<long long>::max()) r_cap = static_cast<int>(std::min<long long>(r_cap, cap_cost / per));
            OptEvaluation e;
            e.omega_c = p.omega_c;
            e.nb = p.b_ids.empty() ? 0 : spec.nb;
            e.la = static_cast<int>(p.a_ids.size());
            if (r_cap < 1) {
                e.pruned = true;
            } else {
                CompiledQuery cq(eng, exact, psi0);
                SearchResult sr = cq.find(tmpl.duration, tmpl.epsilon, tmpl.measure, r_cap);
                e.converged = sr.converged;
                e.pruned = !sr.converged && r_cap < tmpl.r_max;
                e.r = sr.r;
                e.cost = sr.converged ? sr.gates : -1;
                e.epsilon = sr.epsilon;
            }
            evals[i] = e;
        });
        for (size_t i = 0; i < batch.size(); i++) {
            res.history.push_back(evals[i]);
            const auto &e = evals[i];
            if (e.converged && e.cost < best_cost) {
                best_cost = e.cost;
                best_idx = res.history.size() - 1;
            }
        }
    };

    // Baseline first, alone.
    const double base_w = h.size() >= 2 ? heuristic_omega(h).omega_c : 0.0;
    const int base_nb = std::clamp(default_nb(h), budget.nb_min, budget.nb_max);
    {
        Partition p = partition_for(base_w);
        done[key_for(p, base_nb)] = 0;
        run_batch({{base_w, base_nb}});
    }

    auto try_add = [&](std::vector<std::pair<double, int>> &batch, double w, int nb) {
        if (static_cast<int>(done.size()) >= budget.max_evaluations) return false;
        Key k = key_for(partition_for(w), nb);
        if (done.count(k)) return false;
        done[k] = 0;
        batch.push_back({w, nb});
        return true;
    };
    const size_t space = omegas.size() * nbs.size();
    constexpr size_t kBatch = 8;

    if (budget.strategy == OptStrategy::random_search) {
        std::mt19937_64 rng(budget.seed);
        int misses = 0;
        while (static_cast<int>(done.size()) < budget.max_evaluations && misses < 1000 && done.size() < space + 1) {
            std::vector<std::pair<double, int>> batch;
            while (batch.size() < kBatch && static_cast<int>(done.size()) < budget.max_evaluations && misses < 1000) {
                double w = omegas[std::uniform_int_distribution<size_t>(0, omegas.size() - 1)(rng)];
                int nb = nbs[std::uniform_int_distribution<size_t>(0, nbs.size() - 1)(rng)];
                if (!try_add(batch, w, nb)) misses++;
            }
            if (batch.empty()) break;
            run_batch(batch);
        }
    } else {
        // Coarse grid over both axes, then coordinate descent from the incumbent.
        int per_axis = std::max(2, static_cast<int>(std::sqrt(budget.max_evaluations / 2.0)));
        std::vector<std::pair<double, int>> grid;
        for (int i = 0; i < per_axis; i++) {
            double w = omegas[(omegas.size() - 1) * i / std::max(1, per_axis - 1)];
            for (int j = 0; j < per_axis; j++) {
                int nb = nbs[(nbs.size() - 1) * j / std::max(1, per_axis - 1)];
                try_add(grid, w, nb);
            }
        }
        for (size_t s = 0; s < grid.size(); s += kBatch) {
            run_batch(std::vector<std::pair<double, int>>(grid.begin() + s, grid.begin() + std::min(grid.size(), s + kBatch)));
        }
        bool improved = true;
        while (improved && static_cast<int>(done.size()) < budget.max_evaluations) {
            improved = false;
            const long long before = best_cost;
            const OptEvaluation inc = res.history[best_idx];
            size_t wi = 0;
            while (wi + 1 < omegas.size() && omegas[wi] < inc.omega_c) wi++;
            int ni = std::max(0, static_cast<int>(std::lower_bound(nbs.begin(), nbs.end(), std::max(inc.nb, budget.nb_min)) - nbs.begin()));
            std::vector<std::pair<double, int>> nbhd;
            for (int step : {1, 2, 4}) {
                for (int sgn : {-1, 1}) {
                    long long wj = static_cast<long long>(wi) + sgn * step;
                    if (wj >= 0 && wj < static_cast<long long>(omegas.size())) try_add(nbhd, omegas[wj], nbs[ni]);
                    long long nj = ni + sgn * step;
                    if (nj >= 0 && nj < static_cast<long long>(nbs.size())) try_add(nbhd, omegas[wi], nbs[nj]);
                }
            }
            for (size_t s = 0; s < nbhd.size(); s += kBatch) {
                run_batch(std::vector<std::pair<double, int>>(nbhd.begin() + s, nbhd.begin() + std::min(nbhd.size(), s + kBatch)));
            }
            improved = best_cost < before;
        }
    }

    require(best_cost != std::numeric_limits<long long>::max(), ErrorCode::unconverged,
            "optimize_partition: every evaluation failed to converge (" + std::to_string(res.history.size()) + " tried)");
    const OptEvaluation &b = res.history[best_idx];
    res.partition = partition_for(b.omega_c);
    res.partition.omega_c = b.omega_c;
    res.nb = b.nb == 0 ? base_nb : b.nb;
    res.r = b.r;
    res.cost = b.cost;
    res.epsilon = b.epsilon;
    res.baseline_kept = best_idx == 0;
    if (res.baseline_kept) res.partition.provenance = Provenance::heuristic;
    return res;
}

}  // namespace composim
