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

#include <cmath>

#include "test_util.hpp"

using namespace composim;

TEST(Heisenberg, TermCount) {
    for (int n = 2; n <= 9; n++) EXPECT_EQ(heisenberg(n, CouplingConfig{}).size(), size_t(3 * (n - 1) + n)) << n;
    EXPECT_EQ(heisenberg(3, CouplingConfig{}).size(), 9u);
    EXPECT_EQ(spin_glass(8, 0.1, 1.0, 7).size(), 29u);
    EXPECT_THROW(heisenberg(1, CouplingConfig{}), Error);
}

TEST(Heisenberg, UniformMatchesKroneckerOracle) {
    CouplingConfig cfg;
    cfg.jx = 0.3;
    cfg.jy = -0.4;
    cfg.jz = 0.5;
    cfg.bz = 1.1;
    HamiltonianSum h = heisenberg(3, cfg);
    using testutil::kron_string;
    Mat want = 0.3 * (kron_string("XXI") + kron_string("IXX")) - 0.4 * (kron_string("YYI") + kron_string("IYY")) +
               0.5 * (kron_string("ZZI") + kron_string("IZZ")) + 1.1 * (kron_string("ZII") + kron_string("IZI") + kron_string("IIZ"));
    EXPECT_LT((dense(h) - want).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Heisenberg, ExponentialDisorderStatistics) {
    // Mean of Exp(scale) is the scale; 3 (n - 1) draws per chain.
    double sum = 0;
    int count = 0;
    for (uint64_t seed = 0; seed < 200; seed++) {
        HamiltonianSum h = spin_glass(8, 0.1, 1.0, seed);
        for (int i = 0; i < 21; i++) {
            EXPECT_GT(h.terms[i].signed_coeff(), 0);
            sum += h.terms[i].coeff;
            count++;
        }
        for (int i = 21; i < 29; i++) EXPECT_EQ(h.terms[i].coeff, 1.0);
    }
    EXPECT_NEAR(sum / count, 0.1, 0.005);
}

TEST(Heisenberg, WeakCouplingScale) {
    HamiltonianSum h = spin_glass(8, 5e-5, 1.0, 3);
    for (int i = 0; i < 21; i++) EXPECT_LT(h.terms[i].coeff, 5e-5 * 20);
}

TEST(Heisenberg, SeedDeterminism) {
    HamiltonianSum a = spin_glass(6, 0.1, 1.0, 42), b = spin_glass(6, 0.1, 1.0, 42), c = spin_glass(6, 0.1, 1.0, 43);
    bool differs = false;
    for (size_t i = 0; i < a.size(); i++) {
        EXPECT_EQ(a.terms[i].coeff, b.terms[i].coeff);
        differs |= a.terms[i].coeff != c.terms[i].coeff;
    }
    EXPECT_TRUE(differs);
}

TEST(Heisenberg, GaussianDisorder) {
    CouplingConfig cfg;
    cfg.disorder = Disorder::gaussian;
    cfg.mu = 2.0;
    cfg.sigma = 0.0;
    HamiltonianSum h = heisenberg(4, cfg);
    for (int i = 0; i < 9; i++) EXPECT_EQ(h.terms[i].signed_coeff(), 2.0);
    cfg.sigma = -1;
    EXPECT_THROW(heisenberg(4, cfg), Error);
}

TEST(GraphModel, CountsAndDistanceFactor) {
    EXPECT_EQ(graph_model(4, 1).size(), 10u);
    EXPECT_EQ(graph_model(7, 1).size(), 28u);
    EXPECT_EQ(graph_model(8, 1).size(), 36u);
    // Reproduce the draws independently: pairs (i, j), i > j, in order, then fields.
    const int n = 5;
    HamiltonianSum h = graph_model(n, 99);
    std::mt19937_64 rng(99);
    std::normal_distribution<double> normal(0.0, 1.0);
    size_t k = 0;
    for (int i = 1; i < n; i++) {
        for (int j = 0; j < i; j++, k++) {
            double alpha = normal(rng);
            EXPECT_EQ(h.terms[k].signed_coeff(), std::exp(-double(i - j)) * alpha);
            EXPECT_EQ(h.terms[k].axes[i], 'X');
            EXPECT_EQ(h.terms[k].axes[j], 'X');
        }
    }
    for (int q = 0; q < n; q++, k++) EXPECT_EQ(h.terms[k].signed_coeff(), normal(rng));
    LatticeSpec lat = LatticeSpec::chain(4);
    EXPECT_EQ(lat.dist(0, 2), 2);
}

TEST(SpectralDistribution, Examples) {
    HamiltonianSum h;
    h.n_qubits = 1;
    h.add("Z", 1);
    h.add("X", 3);
    auto v = spectral_distribution(h);
    ASSERT_EQ(v.size(), 2u);
    EXPECT_EQ(v[0], 1.0);
    EXPECT_NEAR(v[1], 1.0 / 3, 1e-15);

    CouplingConfig cfg;
    cfg.jx = cfg.jy = cfg.jz = 0.5;
    cfg.bz = 2;
    auto u = spectral_distribution(heisenberg(4, cfg));
    for (int i = 0; i < 4; i++) EXPECT_EQ(u[i], 1.0);
    for (int i = 4; i < 13; i++) EXPECT_EQ(u[i], 0.25);
}

TEST(SpectralDistribution, JelliumIsSharplyPeaked) {
    auto v = spectral_distribution(load_hamiltonian(COMPOSIM_DATA_DIR "/jellium6.json"));
    for (size_t i = 1; i < v.size(); i++) EXPECT_LE(v[i], v[i - 1]);
    // A handful of dominant terms, the bulk below 1% of the largest.
    size_t small = std::count_if(v.begin(), v.end(), [](double x) { return x < 0.01; });
    EXPECT_GT(small, v.size() * 9 / 10);
}
