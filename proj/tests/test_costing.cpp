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

#include <fstream>

#include "test_util.hpp"

using namespace composim;

static int linear_scan(const std::function<double(int)> &eps, double thr, int r_max) {
    for (int r = 1; r <= r_max; r++)
        if (eps(r) <= thr) return r;
    return -1;
}

TEST(Search, SyntheticSequence) {
    std::vector<double> seq{0.5, 0.2, 0.08, 0.03};
    auto eps = [&](int r) { return seq[std::min<size_t>(r, seq.size()) - 1]; };
    SearchResult res = search_min_r(eps, 0.05, 64);
    EXPECT_TRUE(res.converged);
    EXPECT_EQ(res.r, 4);
    EXPECT_FALSE(res.monotone_violation);
}

TEST(Search, MatchesLinearScanOnPowerLaws) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 300; k++) {
        const double c = std::pow(10.0, 3 * u(rng) - 1), p = 0.5 + 3 * u(rng), thr = std::pow(10.0, -3 * u(rng));
        auto eps = [&](int r) { return c / std::pow(double(r), p); };
        SearchResult res = search_min_r(eps, thr, 5000);
        int want = linear_scan(eps, thr, 5000);
        if (want < 0) {
            EXPECT_FALSE(res.converged);
        } else {
            ASSERT_TRUE(res.converged);
            EXPECT_EQ(res.r, want) << c << " " << p << " " << thr;
        }
    }
}

TEST(Search, MatchesLinearScanOnStaircases) {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 200; k++) {
        // Non-increasing sequence with plateaus.
        std::vector<double> seq(200);
        double v = 1.0;
        for (auto &x : seq) {
            if (rng() % 3 == 0) v *= 0.5 + 0.5 * std::uniform_real_distribution<double>(0, 1)(rng);
            x = v;
        }
        auto eps = [&](int r) { return seq[r - 1]; };
        double thr = seq[rng() % seq.size()];
        SearchResult res = search_min_r(eps, thr, 200);
        ASSERT_TRUE(res.converged);
        EXPECT_EQ(res.r, linear_scan(eps, thr, 200));
    }
}

TEST(Search, NonMonotoneTriggersScan) {
    // Below the threshold at r = 4 only, then above again until r = 40. The
    // neighbour check at r = 5 exposes the dip.
    auto eps = [](int r) { return r == 4 ? 0.01 : (r >= 40 ? 0.001 : 0.5); };
    SearchResult res = search_min_r(eps, 0.05, 1000);
    EXPECT_TRUE(res.converged);
    EXPECT_EQ(res.r, 4);
    EXPECT_TRUE(res.fallback_scan);
    EXPECT_TRUE(res.monotone_violation);
}

TEST(Search, Unconverged) {
    auto eps = [](int r) { return 1.0 / r; };
    SearchResult res = search_min_r(eps, 1e-3, 100);
    EXPECT_FALSE(res.converged);
    EXPECT_NEAR(res.epsilon, 0.01, 1e-15);
}

static CostQuery query(ChannelKind kind, uint64_t seed, double t) {
    CostQuery q;
    q.h = normalize(spin_glass(3, 0.3, 1.0, seed));
    q.spec.kind = kind;
    q.spec.inner_order = 1;
    q.spec.nb = 2;
    q.partition = heuristic_partition(q.h);
    q.duration = t;
    q.epsilon = 1e-3;
    q.state_seed = seed;
    return q;
}

TEST(FindMinR, MinimalByDirectEvaluation) {
    for (ChannelKind kind : {ChannelKind::trotter, ChannelKind::qdrift, ChannelKind::composite}) {
        for (uint64_t seed = 0; seed < 3; seed++) {
            CostQuery q = query(kind, seed, 0.4);
            SearchResult res = find_min_r(q);
            ASSERT_TRUE(res.converged);
            CompiledQuery cq(q);
            ErrorEvaluator ev(cq.engine, cq.exact, cq.psi0, q.duration, q.measure);
            EXPECT_LE(ev(res.r), q.epsilon);
            if (res.r > 1) EXPECT_GT(ev(res.r - 1), q.epsilon);
            EXPECT_EQ(res.gates, cq.engine->gate_count(res.r));
        }
    }
}

TEST(FindMinR, ImaginaryTimeAndInfidelity) {
    CostQuery q = query(ChannelKind::composite, 4, 1.0);
    q.spec.time_kind = TimeKind::imaginary;
    SearchResult a = find_min_r(q);
    EXPECT_TRUE(a.converged);
    q.spec.time_kind = TimeKind::real;
    q.measure.kind = MeasureKind::infidelity_exact;
    SearchResult b = find_min_r(q);
    q.measure.kind = MeasureKind::trace_distance;
    SearchResult c = find_min_r(q);
    // Infidelity is quadratically smaller, so the same threshold needs fewer iterations.
    EXPECT_LE(b.r, c.r);
}

TEST(FindMinR, ValidatesQuery) {
    CostQuery q = query(ChannelKind::trotter, 0, 1.0);
    q.epsilon = 2.5;
    EXPECT_THROW(find_min_r(q), Error);
    q.epsilon = 1e-3;
    q.duration = 0;
    EXPECT_THROW(find_min_r(q), Error);
}

TEST(Sweep, TrotterCurveNonDecreasingAndThreadInvariant) {
    CostQuery q = query(ChannelKind::trotter, 1, 1.0);
    auto grid = log_grid(0.01, 3.0, 10);
    CostCurve one = cost_sweep(q, grid, 1), two = cost_sweep(q, grid, 2);
    for (size_t i = 0; i < grid.size(); i++) {
        EXPECT_EQ(one.points[i].result.gates, two.points[i].result.gates);
        EXPECT_EQ(one.points[i].result.epsilon, two.points[i].result.epsilon);
        EXPECT_LE(one.points[i].result.epsilon, q.epsilon);
        if (i) EXPECT_GE(one.points[i].result.gates, one.points[i - 1].result.gates);
    }
    EXPECT_THROW(cost_sweep(q, {1.0, 0.5}, 1), Error);
}

TEST(Grid, DefaultGrid) {
    auto g = default_grid(20);
    ASSERT_EQ(g.size(), 20u);
    EXPECT_EQ(g.back(), 3 * M_PI / 2);
    for (size_t i = 1; i < g.size(); i++) EXPECT_GT(g[i], g[i - 1]);
    EXPECT_GT(g.front(), 0);
}

TEST(Csv, RoundTrip) {
    CostQuery q = query(ChannelKind::composite, 2, 1.0);
    auto grid = log_grid(0.05, 1.0, 4);
    CostCurve a = cost_sweep(q, grid, 1);
    q.spec.kind = ChannelKind::trotter;
    CostCurve b = cost_sweep(q, grid, 1);
    b.points[1].result.converged = false;
    std::string path = testing::TempDir() + "/curves.csv";
    write_csv(path, {a, b});
    auto back = read_csv(path);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].channel, "composite");
    EXPECT_EQ(back[1].channel, "trotter");
    for (size_t i = 0; i < grid.size(); i++) {
        EXPECT_EQ(back[0].points[i].duration, grid[i]);
        EXPECT_EQ(back[0].points[i].result.gates, a.points[i].result.gates);
        EXPECT_EQ(back[0].points[i].result.epsilon, a.points[i].result.epsilon);
    }
    EXPECT_EQ(back[1].points[1].result.gates, -1);
    EXPECT_FALSE(back[1].points[1].result.converged);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "duration,channel,inner_order,outer_order,Nb,omega_c,r,gates,epsilon");
}

static CostCurve synthetic(const std::string &name, const std::vector<double> &t, std::function<double(double)> f) {
    CostCurve c;
    c.channel = name;
    for (double x : t) {
        CostPoint p;
        p.duration = x;
        p.result.converged = true;
        p.result.gates = static_cast<long long>(std::llround(f(x)));
        c.points.push_back(p);
    }
    return c;
}

TEST(Crossover, PowerLawCurves) {
    // QD = 1000 t^2, TS = 100 t: equal at t = 0.1 (cost 10). X = QD / 4.
    auto t = log_grid(0.01, 1.0, 9);
    CostCurve qd = synthetic("qdrift", t, [](double x) { return 1e6 * x * x; });
    CostCurve ts = synthetic("trotter", t, [](double x) { return 1e5 * x; });
    CostCurve x = synthetic("composite", t, [](double x) { return 2.5e5 * x * x; });
    CrossoverReport rep = crossover(qd, ts, x);
    ASSERT_TRUE(rep.found);
    EXPECT_NEAR(rep.t_cross, 0.1, 1e-3);
    EXPECT_NEAR(rep.xi, 4.0, 0.01);
    // No crossing.
    CostCurve low = synthetic("qdrift", t, [](double x) { return 10 * x; });
    EXPECT_FALSE(crossover(low, ts, x).found);
}
