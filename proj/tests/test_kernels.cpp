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
using testutil::evolve;
using testutil::kron_string;

static const TimeKind kKinds[] = {TimeKind::real, TimeKind::imaginary};

TEST(PauliExp, ClosedFormMatchesTaylor) {
    std::mt19937_64 rng(1);
    for (TimeKind k : kKinds) {
        for (const char *s : {"X", "YZ", "XYZ", "IZY"}) {
            for (double th : {0.0, 0.1, -0.7, 2.3}) {
                PauliTerm t = PauliTerm::make(s, 1.0);
                GateCoeffs g = pauli_exp_coeffs(th, k);
                Mat m = g.c * Mat::Identity(t.n_qubits() == 1 ? 2 : 1 << t.n_qubits(), 1 << t.n_qubits()) + g.d * dense(t);
                EXPECT_LT((m - evolve(kron_string(s), th, k)).cwiseAbs().maxCoeff(), 1e-12) << s << " " << th;
            }
        }
    }
}

TEST(PauliExp, ClosedFormMatchesEigendecomposition) {
    for (TimeKind k : kKinds) {
        PauliTerm t = PauliTerm::make("XZY", -0.8);
        Mat want = hermitian_exp(dense(t), 0.37, k);
        GateCoeffs g = pauli_exp_coeffs(0.37 * t.coeff, k);
        Mat unit = dense(t) / t.coeff;
        EXPECT_LT((g.c * Mat::Identity(8, 8) + g.d * unit - want).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(ApplyGate, MatchesDenseProduct) {
    std::mt19937_64 rng(2);
    for (TimeKind k : kKinds) {
        for (const char *s : {"XI", "YZ", "ZZ", "IY", "XY"}) {
            PauliTerm t = PauliTerm::make(s, -1.0);
            Mat g = evolve(t.signed_coeff() * kron_string(s), 0.3, k);
            Vec psi = testutil::random_vec(4, rng), work;
            Vec want = g * psi;
            apply_gate(PauliAction::of(t), pauli_exp_coeffs(0.3, k), psi, work);
            EXPECT_LT((psi - want).cwiseAbs().maxCoeff(), 1e-13) << s;

            Mat m = Mat::Random(4, 4), mw;
            Mat mwant = g * m;
            apply_gate_left(PauliAction::of(t), pauli_exp_coeffs(0.3, k), m, mw);
            EXPECT_LT((m - mwant).cwiseAbs().maxCoeff(), 1e-13) << s;
        }
    }
}

TEST(ConjugateGate, MatchesDenseSandwich) {
    std::mt19937_64 rng(3);
    for (TimeKind k : kKinds) {
        for (const char *s : {"XIZ", "YYI", "ZIZ", "IXY", "YXZ"}) {
            PauliTerm t = PauliTerm::make(s, 1.0);
            Mat g = evolve(kron_string(s), -0.45, k);
            Vec v = testutil::random_vec(8, rng);
            Mat rho = v * v.adjoint(), work;
            Mat want = g * rho * g.adjoint();
            conjugate_gate(PauliAction::of(t), pauli_exp_coeffs(-0.45, k), rho, work);
            EXPECT_LT((rho - want).cwiseAbs().maxCoeff(), 1e-13) << s;
        }
    }
}

TEST(QDriftMap, MatchesExplicitMixture) {
    std::mt19937_64 rng(4);
    for (TimeKind k : kKinds) {
        for (int trial = 0; trial < 10; trial++) {
            HamiltonianSum h = testutil::random_hamiltonian(3, 2 + trial, rng, true);
            QDriftMap q(h);
            const double th = 0.05 + 0.1 * trial;
            Vec v = testutil::random_vec(8, rng);
            Mat rho = v * v.adjoint(), w, y;
            Mat want = Mat::Zero(8, 8);
            for (const auto &t : h.terms) {
                Mat g = evolve(t.sign * kron_string(t.axes), th, k);
                want += t.coeff / h.lambda() * g * rho * g.adjoint();
            }
            q.apply(rho, th, k, w, y);
            EXPECT_LT((rho - want).cwiseAbs().maxCoeff(), 1e-13);
            EXPECT_LE(q.group_count(), h.size());
        }
    }
}

TEST(ExactEvolver, MatchesTaylor) {
    std::mt19937_64 rng(5);
    HamiltonianSum h = testutil::random_hamiltonian(3, 7, rng);
    ExactEvolver ex(h);
    for (TimeKind k : kKinds) {
        Mat want = evolve(testutil::kron_dense(h), 0.9, k);
        EXPECT_LT((ex.propagator(0.9, k) - want).cwiseAbs().maxCoeff(), 1e-11);
        Vec psi = testutil::random_vec(8, rng);
        EXPECT_LT((ex.apply(psi, 0.9, k) - want * psi).cwiseAbs().maxCoeff(), 1e-11);
    }
}
