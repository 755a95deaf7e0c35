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

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace composim;

static HamiltonianSum from_norms(const std::vector<double> &norms) {
    // Distinct single-qubit-ish strings on enough qubits to keep them distinct.
    HamiltonianSum h;
    h.n_qubits = 3;
    static const char *strings[] = {"XII", "IXI", "IIX", "ZII", "IZI", "IIZ", "XXI", "IXX", "ZZI", "IZZ", "YII", "IYI"};
    for (size_t i = 0; i < norms.size(); i++) h.add(strings[i], norms[i]);
    return h;
}

TEST(Chop, Examples) {
    HamiltonianSum h = from_norms({3, 2, 1, 0.1});
    Partition p = chop(h, 1.0);
    EXPECT_EQ(p.a_ids, (std::vector<int>{0, 1, 2}));
    EXPECT_EQ(p.b_ids, (std::vector<int>{3}));
    Partition all = chop(h, 0.0);
    EXPECT_TRUE(all.b_ids.empty());
    EXPECT_THROW(chop(h, 3.5), Error);
    EXPECT_THROW(chop(h, -1), Error);
}

TEST(Chop, WeakCouplingHeisenbergPutsBondsInB) {
    HamiltonianSum h = spin_glass(6, 0.1, 1.0, 4);
    double jmax = 0;
    for (int i = 0; i < 15; i++) jmax = std::max(jmax, h.terms[i].coeff);
    // omega_c = max J keeps the largest coupling in A; just above it everything
    // but the fields goes to B.
    Partition p = chop(h, std::nextafter(jmax, 2.0));
    for (int i : p.a_ids) EXPECT_GE(i, 15);
    EXPECT_EQ(p.a_ids.size(), 6u);
}

TEST(Chop, Invariants) {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 20; k++) {
        HamiltonianSum h = testutil::random_hamiltonian(3, 10, rng);
        double w = std::uniform_real_distribution<double>(0, h.max_coeff())(rng);
        Partition p = chop(h, w);
        p.validate(h);
        EXPECT_EQ(p.a_ids.size() + p.b_ids.size(), h.size());
        for (int i : p.a_ids) EXPECT_GE(h.terms[i].coeff, w);
        for (int i : p.b_ids) EXPECT_LT(h.terms[i].coeff, w);
        EXPECT_NEAR(p.lambda_a(h) + p.lambda_b(h), h.lambda(), 1e-14);
        // Idempotent and order independent.
        Partition q = chop(h, w);
        EXPECT_EQ(p.a_ids, q.a_ids);
        std::vector<int> perm(h.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        Partition s = chop(h.subset(perm), w);
        std::vector<int> mapped;
        for (int i : s.a_ids) mapped.push_back(perm[i]);
        std::sort(mapped.begin(), mapped.end());
        EXPECT_EQ(mapped, p.a_ids);
    }
}

TEST(Partition, ValidateRejectsOverlapAndGaps) {
    HamiltonianSum h = from_norms({1, 2, 3});
    EXPECT_THROW(Partition::manual({0, 1}, {1, 2}).validate(h), Error);
    EXPECT_THROW(Partition::manual({0}, {2}).validate(h), Error);
    EXPECT_NO_THROW(Partition::manual({0, 2}, {1}).validate(h));
}

TEST(HeuristicOmega, GapExample) {
    HamiltonianSum h = from_norms({1.0, 0.9, 0.5, 0.1, 0.09, 0.08});
    HeuristicOmega w = heuristic_omega(h);
    EXPECT_FALSE(w.degenerate);
    EXPECT_GT(w.omega_c, 0.1);
    EXPECT_LE(w.omega_c, 0.5);
    Partition p = heuristic_partition(h);
    EXPECT_EQ(p.a_ids.size(), 3u);
    EXPECT_EQ(p.provenance, Provenance::heuristic);
}

TEST(HeuristicOmega, MatchesExhaustiveGapScan) {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 50; k++) {
        int L = 2 + k % 10;
        std::vector<double> norms;
        for (int i = 0; i < L; i++) norms.push_back(std::uniform_real_distribution<double>(0.01, 1)(rng));
        HamiltonianSum h = from_norms(norms);
        std::vector<double> v = norms;
        std::sort(v.begin(), v.end(), std::greater<>());
        // Oracle: every split with |B| >= |A|; largest gap, ties to the larger A.
        double best = -1;
        int best_a = -1;
        for (int a = 1; a < L; a++) {
            if (L - a < a) continue;
            double g = v[a - 1] - v[a];
            if (g > best || (g == best && a > best_a)) {
                best = g;
                best_a = a;
            }
        }
        Partition p = heuristic_partition(h);
        EXPECT_EQ(static_cast<int>(p.a_ids.size()), best_a) << k;
        EXPECT_GE(p.b_ids.size(), p.a_ids.size());
    }
}

TEST(HeuristicOmega, Degenerate) {
    HamiltonianSum h = from_norms({0.5, 0.5, 0.5, 0.5});
    HeuristicOmega w = heuristic_omega(h);
    EXPECT_TRUE(w.degenerate);
    EXPECT_EQ(w.omega_c, 0.5);
    EXPECT_THROW(heuristic_omega(from_norms({1.0})), Error);
}

TEST(HeuristicOmega, JelliumKnee) {
    HamiltonianSum h = load_hamiltonian(COMPOSIM_DATA_DIR "/jellium6.json");
    HeuristicOmega w = heuristic_omega(h);
    auto v = spectral_distribution(h);
    // The cut falls between the few dominant terms and the bulk.
    Partition p = heuristic_partition(h);
    EXPECT_LE(p.a_ids.size(), 6u);
    for (int i : p.b_ids) EXPECT_LT(h.terms[i].coeff, w.omega_c);
    EXPECT_GT(w.omega_c / h.max_coeff(), v[p.a_ids.size()]);
}

TEST(DefaultNb, Examples) {
    auto sized = [](int L) {
        HamiltonianSum h;
        h.n_qubits = 8;
        for (int i = 0; i < L; i++) {
            std::string s(8, 'I');
            for (int q = 0; q < 8; q++) s[q] = "IXYZ"[(i >> (2 * (q % 4))) & 3];
            h.add(s, 1.0);
        }
        return default_nb(h);
    };
    EXPECT_EQ(sized(62), 12);
    EXPECT_EQ(sized(5), 1);
    EXPECT_EQ(sized(94), 19);
    EXPECT_EQ(sized(1), 1);
    EXPECT_EQ(default_nb(load_hamiltonian(COMPOSIM_DATA_DIR "/h3.json")), 12);
}

TEST(OmegaCandidates, CoverEveryDistinctChop) {
    HamiltonianSum h = from_norms({3, 2, 2, 1, 0.5});
    auto c = omega_candidates(h);
    std::set<size_t> sizes;
    for (double w : c) sizes.insert(chop(h, w).a_ids.size());
    EXPECT_EQ(sizes, (std::set<size_t>{0, 1, 3, 4, 5}));
    EXPECT_EQ(c.front(), 0.0);
}

static CostQuery small_query(double t) {
    CostQuery q;
    q.h = normalize(spin_glass(3, 0.3, 1.0, 2));
    q.spec.kind = ChannelKind::composite;
    q.duration = t;
    q.epsilon = 1e-3;
    return q;
}

TEST(Optimizer, NeverWorseThanBaseline) {
    for (auto strat : {OptStrategy::random_search, OptStrategy::grid_descent}) {
        OptimizerBudget b;
        b.max_evaluations = 30;
        b.nb_max = 8;
        b.seed = 5;
        b.strategy = strat;
        auto res = optimize_partition(small_query(0.5), b);
        ASSERT_FALSE(res.history.empty());
        const auto &base = res.history.front();
        ASSERT_TRUE(base.converged);
        EXPECT_LE(res.cost, base.cost);
        EXPECT_LE(static_cast<int>(res.history.size()), 30);
        for (const auto &e : res.history)
            if (e.converged) EXPECT_GE(e.cost, res.cost);
    }
}

TEST(Optimizer, BudgetOneReturnsBaseline) {
    OptimizerBudget b;
    b.max_evaluations = 1;
    auto q = small_query(0.5);
    auto res = optimize_partition(q, b);
    EXPECT_EQ(res.history.size(), 1u);
    EXPECT_TRUE(res.baseline_kept);
    EXPECT_EQ(res.partition.a_ids, heuristic_partition(q.h).a_ids);
    EXPECT_EQ(res.nb, std::clamp(default_nb(q.h), b.nb_min, b.nb_max));
}

TEST(Optimizer, SingleTermIsAllTrotter) {
    CostQuery q;
    q.h.n_qubits = 1;
    q.h.add("Z", 1.0);
    q.spec.kind = ChannelKind::composite;
    q.duration = 1;
    OptimizerBudget b;
    b.max_evaluations = 5;
    auto res = optimize_partition(q, b);
    EXPECT_EQ(res.cost, 1);
    EXPECT_TRUE(res.partition.b_ids.empty());
}

TEST(Optimizer, ThreadCountDoesNotChangeResult) {
    OptimizerBudget b;
    b.max_evaluations = 25;
    b.nb_max = 6;
    b.seed = 9;
    b.threads = 1;
    auto one = optimize_partition(small_query(0.8), b);
    b.threads = 3;
    auto three = optimize_partition(small_query(0.8), b);
    EXPECT_EQ(one.cost, three.cost);
    EXPECT_EQ(one.nb, three.nb);
    EXPECT_EQ(one.partition.a_ids, three.partition.a_ids);
    ASSERT_EQ(one.history.size(), three.history.size());
    for (size_t i = 0; i < one.history.size(); i++) EXPECT_EQ(one.history[i].to_json(), three.history[i].to_json());
}

TEST(Optimizer, BeatsPureChannelsAtCrossover) {
    // 3-qubit Heisenberg: locate the pure-channel crossover on a grid, then the
    // optimized composite must cost no more than either pure channel there.
    CostQuery q = small_query(1.0);
    auto grid = log_grid(0.01, 1.0, 9);
    CostQuery ts = q, qd = q;
    ts.spec.kind = ChannelKind::trotter;
    qd.spec.kind = ChannelKind::qdrift;
    CostCurve cts = cost_sweep(ts, grid, 1), cqd = cost_sweep(qd, grid, 1);
    CostQuery x = q;
    x.partition = heuristic_partition(q.h);
    x.spec.nb = default_nb(q.h);
    CrossoverReport rep = crossover(cqd, cts, cost_sweep(x, grid, 1));
    ASSERT_TRUE(rep.found);
    CostQuery at = q;
    at.duration = rep.t_cross;
    OptimizerBudget b;
    b.max_evaluations = 50;
    b.nb_max = 16;
    auto res = optimize_partition(at, b);
    qd.duration = ts.duration = rep.t_cross;
    long long c_qd = find_min_r(qd).gates, c_ts = find_min_r(ts).gates;
    EXPECT_LE(res.cost, std::min(c_qd, c_ts));
}
