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
using testutil::kron_string;

static void expect_error(ErrorCode code, const std::function<void()> &f) {
    try {
        f();
        FAIL() << "expected " << error_code_name(code);
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

TEST(PauliTerm, DenseSingleZ) {
    Mat m = dense(PauliTerm::make("Z", 1.0));
    Mat want(2, 2);
    want << 1, 0, 0, -1;
    EXPECT_LT((m - want).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PauliTerm, DenseIdentityScaled) {
    Mat m = dense(PauliTerm::make("II", 2.5));
    EXPECT_LT((m - 2.5 * Mat::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PauliTerm, DenseMatchesKronecker) {
    EXPECT_LT((dense(PauliTerm::make("XZ", 1.0)) - kron_string("XZ")).cwiseAbs().maxCoeff(), 1e-15);
    const char *axes = "IXYZ";
    for (int a = 0; a < 4; a++)
        for (int b = 0; b < 4; b++)
            for (int c = 0; c < 4; c++) {
                std::string s{axes[a], axes[b], axes[c]};
                Mat got = dense(PauliTerm::make(s, -0.7));
                EXPECT_LT((got + 0.7 * kron_string(s)).cwiseAbs().maxCoeff(), 1e-15) << s;
            }
}

TEST(PauliTerm, NegativeCoefficientFoldedIntoPhase) {
    PauliTerm t = PauliTerm::make("XY", -3.0);
    EXPECT_EQ(t.coeff, 3.0);
    EXPECT_EQ(t.sign, -1);
    EXPECT_EQ(t.signed_coeff(), -3.0);
    EXPECT_NEAR(spectral_norm(dense(PauliTerm::make("XY", 1.0))), 1.0, 1e-14);
}

TEST(PauliTerm, BadInput) {
    expect_error(ErrorCode::bad_pauli, [] { PauliTerm::make("XQ", 1.0); });
    expect_error(ErrorCode::bad_pauli, [] { PauliTerm::make("", 1.0); });
    expect_error(ErrorCode::invalid_argument, [] { PauliTerm::make("X", NAN); });
}

TEST(Commutator, Basics) {
    EXPECT_EQ(commutator_norm(PauliTerm::make("X", 1), PauliTerm::make("Z", 1)), 2.0);
    EXPECT_EQ(commutator_norm(PauliTerm::make("Z", 1), PauliTerm::make("Z", 1)), 0.0);
    expect_error(ErrorCode::dimension_mismatch, [] { commutator_norm(PauliTerm::make("X", 1), PauliTerm::make("XX", 1)); });
}

TEST(Commutator, AgainstDenseSvd) {
    auto check = [](const std::string &sa, double ca, const std::string &sb, double cb) {
        PauliTerm a = PauliTerm::make(sa, ca), b = PauliTerm::make(sb, cb);
        Mat ma = ca * kron_string(sa), mb = cb * kron_string(sb);
        double want = Eigen::JacobiSVD<Mat>(ma * mb - mb * ma).singularValues()(0);
        EXPECT_NEAR(commutator_norm(a, b), want, 1e-12) << sa << " " << sb;
    };
    check("XY", 3, "YX", 2);  // commuting: two anticommuting sites
    check("XY", 3, "YY", 2);  // one anticommuting site -> 12
    EXPECT_EQ(commutator_norm(PauliTerm::make("XY", 3), PauliTerm::make("YY", 2)), 12.0);
    std::mt19937_64 rng(11);
    const char *axes = "IXYZ";
    std::uniform_int_distribution<int> pick(0, 3);
    for (int k = 0; k < 200; k++) {
        std::string sa, sb;
        for (int q = 0; q < 3; q++) {
            sa += axes[pick(rng)];
            sb += axes[pick(rng)];
        }
        check(sa, 0.5 + k % 3, sb, -1.25);
    }
}

TEST(Commutator, ParityProperty) {
    std::mt19937_64 rng(5);
    auto h = testutil::random_hamiltonian(4, 40, rng);
    for (const auto &a : h.terms)
        for (const auto &b : h.terms) {
            double c = commutator_norm(a, b);
            EXPECT_TRUE(c == 0.0 || c == 2 * a.coeff * b.coeff);
        }
}

TEST(SpectralNorm, Examples) {
    EXPECT_NEAR(spectral_norm(Mat::Identity(2, 2)), 1.0, 1e-15);
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 3;
    d(1, 1) = -5;
    EXPECT_NEAR(spectral_norm(d), 5.0, 1e-14);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 20; k++) {
        Mat a = Mat::Random(4, 4);
        Mat herm = a + a.adjoint();
        Eigen::ComplexEigenSolver<Mat> es(herm);
        EXPECT_NEAR(spectral_norm(herm), es.eigenvalues().cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_NEAR(spectral_norm(a), Eigen::JacobiSVD<Mat>(a).singularValues()(0), 1e-12);
    }
}

TEST(HamiltonianSum, DenseIsLinearAndHermitian) {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 10; k++) {
        auto h = testutil::random_hamiltonian(3, 12, rng, true);
        Mat m = dense(h);
        EXPECT_LT((m - testutil::kron_dense(h)).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_GE(h.lambda() + 1e-12, spectral_norm(m));
    }
}

TEST(HamiltonianSum, InconsistentQubits) {
    HamiltonianSum h;
    h.n_qubits = 2;
    h.add("XX", 1);
    h.add("XXX", 1);
    expect_error(ErrorCode::inconsistent_qubits, [&] { h.validate(); });
}

TEST(Normalize, Examples) {
    HamiltonianSum h;
    h.n_qubits = 1;
    h.add("Z", 4);
    auto n = normalize(h);
    EXPECT_NEAR(n.terms[0].coeff, 1.0, 1e-15);

    HamiltonianSum g;
    g.n_qubits = 1;
    g.add("X", 2);
    g.add("Z", 2);
    EXPECT_NEAR(spectral_norm(dense(g)), std::sqrt(8.0), 1e-13);
    auto gn = normalize(g);
    EXPECT_NEAR(spectral_norm(dense(gn)), 1.0, 1e-13);
    auto gnn = normalize(gn);
    for (size_t i = 0; i < gn.size(); i++) EXPECT_NEAR(gnn.terms[i].coeff, gn.terms[i].coeff, 1e-15);

    HamiltonianSum zero;
    zero.n_qubits = 1;
    zero.add("X", 1);
    zero.add("X", -1);
    expect_error(ErrorCode::invalid_argument, [&] { normalize(zero); });
    HamiltonianSum empty;
    empty.n_qubits = 1;
    expect_error(ErrorCode::empty_hamiltonian, [&] { normalize(empty); });
}

TEST(DenseSize, Capped) {
    expect_error(ErrorCode::invalid_argument, [] { dense(PauliTerm::make(std::string(13, 'Z'), 1)); });
}

TEST(Json, DistinctErrors) {
    expect_error(ErrorCode::parse_error, [] { hamiltonian_from_json(nlohmann::json::array()); });
    expect_error(ErrorCode::parse_error, [] { hamiltonian_from_json({{"terms", nlohmann::json::array()}}); });
    expect_error(ErrorCode::bad_pauli, [] {
        hamiltonian_from_json({{"n_qubits", 1}, {"terms", {{{"pauli", "W"}, {"coeff", 1.0}}}}});
    });
    expect_error(ErrorCode::inconsistent_qubits, [] {
        hamiltonian_from_json({{"n_qubits", 2}, {"terms", {{{"pauli", "X"}, {"coeff", 1.0}}}}});
    });
    expect_error(ErrorCode::empty_hamiltonian, [] { hamiltonian_from_json({{"n_qubits", 2}, {"terms", nlohmann::json::array()}}); });
}

TEST(Json, RoundTripBitIdentical) {
    std::mt19937_64 rng(8);
    auto h = testutil::random_hamiltonian(3, 15, rng);
    std::string path = testing::TempDir() + "/rt.json";
    save_hamiltonian(h, path);
    auto g = load_hamiltonian(path);
    save_hamiltonian(g, path);
    auto k = load_hamiltonian(path);
    ASSERT_EQ(h.size(), k.size());
    for (size_t i = 0; i < h.size(); i++) {
        EXPECT_EQ(h.terms[i].axes, k.terms[i].axes);
        EXPECT_EQ(h.terms[i].signed_coeff(), k.terms[i].signed_coeff());
    }
    expect_error(ErrorCode::io_error, [] { load_hamiltonian("/nonexistent/x.json"); });
}

TEST(Json, ShippedFiles) {
    EXPECT_EQ(load_hamiltonian(COMPOSIM_DATA_DIR "/h3.json").size(), 62u);
    EXPECT_EQ(load_hamiltonian(COMPOSIM_DATA_DIR "/jellium6.json").size(), 94u);
    EXPECT_EQ(load_hamiltonian(COMPOSIM_DATA_DIR "/jellium5.json").size(), 56u);
    EXPECT_EQ(load_hamiltonian(COMPOSIM_DATA_DIR "/jellium7.json").size(), 197u);
}
