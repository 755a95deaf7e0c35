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

#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "composim/pauli.hpp"

namespace composim {

/// Hypercubic lattice with L1 graph distance. Only D = 1 is built anywhere.
struct LatticeSpec {
    int dimension = 1;
    int extent = 2;

    static LatticeSpec chain(int n_sites) {
        require(n_sites >= 2, ErrorCode::invalid_argument, "a lattice needs at least 2 sites per axis");
        return LatticeSpec{1, n_sites};
    }

    int n_sites() const {
        int n = 1;
        for (int d = 0; d < dimension; d++) n *= extent;
        return n;
    }

    int dist(int u, int v) const {
        int s = 0;
        for (int d = 0; d < dimension; d++) {
            s += std::abs(u % extent - v % extent);
            u /= extent;
            v /= extent;
        }
        return s;
    }
};

enum class Disorder { none, gaussian, exponential };

struct CouplingConfig {
    double jx = 1, jy = 1, jz = 1;
    double bz = 1;
    uint64_t rng_seed = 0;
    Disorder disorder = Disorder::none;
    double mu = 0, sigma = 1;  // gaussian
    double scale = 0.1;        // exponential

    void validate() const {
        if (disorder == Disorder::exponential) require(scale > 0, ErrorCode::invalid_argument, "exponential scale must be > 0");
        if (disorder == Disorder::gaussian) require(sigma >= 0, ErrorCode::invalid_argument, "gaussian sigma must be >= 0");
    }
};

inline constexpr const char *kRngName = "mt19937_64";

namespace detail {
inline std::string two_site(int n, int i, int j, char a) {
    std::string s(n, 'I');
    s[i] = a;
    s[j] = a;
    return s;
}
inline std::string one_site(int n, int i, char a) {
    std::string s(n, 'I');
    s[i] = a;
    return s;
}
}  // namespace detail

/// Open-chain Heisenberg model. Bonds come first (XX, YY, ZZ per bond), then
/// the field terms. With disorder, every bond coupling J_nu^(j) is drawn
/// independently and replaces the uniform value.
inline HamiltonianSum heisenberg(int n_sites, const CouplingConfig &cfg) {
    require(n_sites >= 2, ErrorCode::invalid_argument, "heisenberg needs at least 2 sites");
    cfg.validate();
    std::mt19937_64 rng(cfg.rng_seed);
    auto draw = [&](double uniform) {
        switch (cfg.disorder) {
            case Disorder::none: return uniform;
            case Disorder::gaussian: return std::normal_distribution<double>(cfg.mu, cfg.sigma)(rng);
            case Disorder::exponential: return std::exponential_distribution<double>(1.0 / cfg.scale)(rng);
        }
        return uniform;
    };
    HamiltonianSum h;
    h.n_qubits = n_sites;
    for (int j = 0; j + 1 < n_sites; j++) {
        h.add(detail::two_site(n_sites, j, j + 1, 'X'), draw(cfg.jx));
        h.add(detail::two_site(n_sites, j, j + 1, 'Y'), draw(cfg.jy));
        h.add(detail::two_site(n_sites, j, j + 1, 'Z'), draw(cfg.jz));
    }
    for (int i = 0; i < n_sites; i++) h.add(detail::one_site(n_sites, i, 'Z'), cfg.bz);
    return h;
}

/// Heisenberg chain with exponentially distributed bond couplings.
inline HamiltonianSum spin_glass(int n_sites, double scale, double bz, uint64_t seed) {
    CouplingConfig cfg;
    cfg.disorder = Disorder::exponential;
    cfg.scale = scale;
    cfg.bz = bz;
    cfg.rng_seed = seed;
    return heisenberg(n_sites, cfg);
}

/// 1D graph model: e^{-dist(i,j)} alpha_ij X_i X_j over i > j plus beta_k Z_k,
/// alpha and beta standard normal.
inline HamiltonianSum graph_model(int n_sites, uint64_t seed) {
    LatticeSpec lat = LatticeSpec::chain(n_sites);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    HamiltonianSum h;
    h.n_qubits = n_sites;
    for (int i = 1; i < n_sites; i++) {
        for (int j = 0; j < i; j++) {
            double alpha = normal(rng);
            h.add(detail::two_site(n_sites, i, j, 'X'), std::exp(-double(lat.dist(i, j))) * alpha);
        }
    }
    for (int k = 0; k < n_sites; k++) h.add(detail::one_site(n_sites, k, 'Z'), normal(rng));
    return h;
}

/// Term norms sorted descending, divided by the largest.
inline std::vector<double> spectral_distribution(const HamiltonianSum &h) {
    require(!h.empty(), ErrorCode::empty_hamiltonian, "spectral distribution of an empty Hamiltonian");
    std::vector<double> v;
    v.reserve(h.size());
    for (const auto &t : h.terms) v.push_back(t.coeff);
    std::sort(v.begin(), v.end(), std::greater<>());
    double m = v.front();
    if (m > 0) {
        for (auto &x : v) x /= m;
    }
    return v;
}

}  // namespace composim
