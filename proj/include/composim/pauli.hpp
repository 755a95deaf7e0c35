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

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "composim/common.hpp"

namespace composim {

inline constexpr int kMaxDenseQubits = 12;

/// Weighted Pauli string. The stored coefficient is non-negative; a negative
/// input coefficient is kept as sign = -1, which multiplies the string itself.
///
/// Basis convention: character q of `axes` acts on bit (n - 1 - q) of the
/// computational basis index, so "XZ" realizes kron(X, Z).
struct PauliTerm {
    std::string axes;
    double coeff = 0;
    int sign = 1;
    uint64_t x_mask = 0;
    uint64_t z_mask = 0;
    int n_y = 0;

    static PauliTerm make(const std::string &axes, double signed_coeff) {
        require(!axes.empty(), ErrorCode::bad_pauli, "empty Pauli string");
        require(axes.size() <= 63, ErrorCode::bad_pauli, "Pauli string longer than 63 qubits");
        require(std::isfinite(signed_coeff), ErrorCode::invalid_argument, "non-finite coefficient for " + axes);
        PauliTerm t;
        t.axes = axes;
        t.coeff = std::abs(signed_coeff);
        t.sign = signed_coeff < 0 ? -1 : 1;
        size_t n = axes.size();
        for (size_t q = 0; q < n; q++) {
            uint64_t bit = uint64_t{1} << (n - 1 - q);
            switch (axes[q]) {
                case 'I': break;
                case 'X': t.x_mask |= bit; break;
                case 'Z': t.z_mask |= bit; break;
                case 'Y':
                    t.x_mask |= bit;
                    t.z_mask |= bit;
                    t.n_y++;
                    break;
                default:
                    throw Error(ErrorCode::bad_pauli, "invalid character in Pauli string '" + axes + "'");
            }
        }
        return t;
    }

    int n_qubits() const { return static_cast<int>(axes.size()); }
    double signed_coeff() const { return sign * coeff; }
    bool is_identity() const { return x_mask == 0 && z_mask == 0; }

    /// sign * i^{n_y}; the unit operator sends |j> to phase0 * (-1)^{|j & z|} |j ^ x>.
    cplx phase0() const {
        static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return double(sign) * ipow[n_y & 3];
    }
};

inline bool anticommute(const PauliTerm &a, const PauliTerm &b) {
    return (std::popcount(a.x_mask & b.z_mask) + std::popcount(a.z_mask & b.x_mask)) & 1;
}

inline double commutator_norm(const PauliTerm &a, const PauliTerm &b) {
    require(a.n_qubits() == b.n_qubits(), ErrorCode::dimension_mismatch, "commutator of terms with different qubit counts");
    return anticommute(a, b) ? 2 * a.coeff * b.coeff : 0.0;
}

inline void check_dense_size(int n) {
    require(n >= 1 && n <= kMaxDenseQubits, ErrorCode::invalid_argument,
            "dense realization needs 1 <= n <= " + std::to_string(kMaxDenseQubits) + " qubits, got " + std::to_string(n));
}

/// Adds w * (unit string of t) into m.
inline void add_dense(Mat &m, const PauliTerm &t, cplx w) {
    size_t d = size_t{1} << t.n_qubits();
    cplx p0 = w * t.phase0();
    for (size_t j = 0; j < d; j++) {
        double s = (std::popcount(j & t.z_mask) & 1) ? -1.0 : 1.0;
        m(j ^ t.x_mask, j) += s * p0;
    }
}

inline Mat dense(const PauliTerm &t) {
    check_dense_size(t.n_qubits());
    size_t d = size_t{1} << t.n_qubits();
    Mat m = Mat::Zero(d, d);
    add_dense(m, t, t.coeff);
    return m;
}

/// Largest singular value.
inline double spectral_norm(const Mat &m) {
    if (m.size() == 0) return 0;
    if (m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-13 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
        Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    Eigen::BDCSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

struct HamiltonianSum {
    int n_qubits = 0;
    std::vector<PauliTerm> terms;

    HamiltonianSum() = default;
    HamiltonianSum(int n, std::vector<PauliTerm> ts) : n_qubits(n), terms(std::move(ts)) { validate(); }

    void validate() const {
        require(n_qubits >= 1, ErrorCode::invalid_argument, "n_qubits must be positive");
        for (const auto &t : terms) {
            require(t.n_qubits() == n_qubits, ErrorCode::inconsistent_qubits,
                    "term '" + t.axes + "' does not match n_qubits = " + std::to_string(n_qubits));
        }
    }

    size_t size() const { return terms.size(); }
    bool empty() const { return terms.empty(); }
    size_t dim() const { return size_t{1} << n_qubits; }

    double lambda() const {
        double s = 0;
        for (const auto &t : terms) s += t.coeff;
        return s;
    }

    double max_coeff() const {
        double m = 0;
        for (const auto &t : terms) m = std::max(m, t.coeff);
        return m;
    }

    HamiltonianSum subset(const std::vector<int> &ids) const {
        HamiltonianSum out;
        out.n_qubits = n_qubits;
        out.terms.reserve(ids.size());
        for (int i : ids) out.terms.push_back(terms.at(i));
        return out;
    }

    void add(const std::string &axes, double signed_coeff) { terms.push_back(PauliTerm::make(axes, signed_coeff)); }
};

inline Mat dense(const HamiltonianSum &h) {
    check_dense_size(h.n_qubits);
    Mat m = Mat::Zero(h.dim(), h.dim());
    for (const auto &t : h.terms) add_dense(m, t, t.coeff);
    return m;
}

/// Rescales all coefficients so that the full sum has spectral norm 1.
inline HamiltonianSum normalize(const HamiltonianSum &h) {
    require(!h.empty(), ErrorCode::empty_hamiltonian, "cannot normalize an empty Hamiltonian");
    double nrm = spectral_norm(dense(h));
    require(nrm > 1e-300, ErrorCode::invalid_argument, "cannot normalize the zero Hamiltonian");
    HamiltonianSum out = h;
    for (auto &t : out.terms) t.coeff /= nrm;
    return out;
}

// JSON I/O ------------------------------------------------------------------

inline HamiltonianSum hamiltonian_from_json(const nlohmann::json &j) {
    require(j.is_object(), ErrorCode::parse_error, "Hamiltonian JSON must be an object");
    require(j.contains("n_qubits") && j["n_qubits"].is_number_integer(), ErrorCode::parse_error, "missing integer n_qubits");
    require(j.contains("terms") && j["terms"].is_array(), ErrorCode::parse_error, "missing terms array");
    HamiltonianSum h;
    h.n_qubits = j["n_qubits"].get<int>();
    require(h.n_qubits >= 1, ErrorCode::parse_error, "n_qubits must be positive");
    for (const auto &t : j["terms"]) {
        require(t.is_object() && t.contains("pauli") && t["pauli"].is_string() && t.contains("coeff") && t["coeff"].is_number(),
                ErrorCode::parse_error, "each term needs a string 'pauli' and a numeric 'coeff'");
        std::string axes = t["pauli"].get<std::string>();
        for (char c : axes) {
            require(c == 'I' || c == 'X' || c == 'Y' || c == 'Z', ErrorCode::bad_pauli, "invalid Pauli string '" + axes + "'");
        }
        require(static_cast<int>(axes.size()) == h.n_qubits, ErrorCode::inconsistent_qubits,
                "Pauli string '" + axes + "' has wrong length for n_qubits = " + std::to_string(h.n_qubits));
        h.terms.push_back(PauliTerm::make(axes, t["coeff"].get<double>()));
    }
    require(!h.terms.empty(), ErrorCode::empty_hamiltonian, "Hamiltonian has no terms");
    return h;
}

inline nlohmann::json hamiltonian_to_json(const HamiltonianSum &h) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto &t : h.terms) terms.push_back({{"pauli", t.axes}, {"coeff", t.signed_coeff()}});
    return {{"n_qubits", h.n_qubits}, {"terms", terms}};
}

inline HamiltonianSum load_hamiltonian(const std::string &path) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::io_error, "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::parse_error, path + ": " + e.what());
    }
    return hamiltonian_from_json(j);
}

inline void save_hamiltonian(const HamiltonianSum &h, const std::string &path) {
    std::ofstream out(path);
    require(out.good(), ErrorCode::io_error, "cannot write " + path);
    out << hamiltonian_to_json(h).dump(1) << "\n";
}

}  // namespace composim
