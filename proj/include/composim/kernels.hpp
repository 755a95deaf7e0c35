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

// Matrix-free application of Pauli-string gates and of the averaged
// single-sample QDrift map. A unit string P acts as
//     P|j> = ph(j) |j ^ x>,   ph(j) = ph0 * (-1)^{|j & z|},
// so every product with P is a permutation plus a diagonal phase.

#pragma once

#include <bit>
#include <map>
#include <vector>

#include <Eigen/Eigenvalues>

#include "composim/pauli.hpp"

namespace composim {

struct PauliAction {
    uint64_t x = 0;
    uint64_t z = 0;
    cplx ph0 = 1;

    static PauliAction of(const PauliTerm &t) { return {t.x_mask, t.z_mask, t.phase0()}; }

    cplx ph(size_t j) const { return (std::popcount(j & z) & 1) ? -ph0 : ph0; }

    void phase_table(size_t d, std::vector<cplx> &out) const {
        out.resize(d);
        for (size_t j = 0; j < d; j++) out[j] = ph(j);
    }
};

/// Coefficients of the gate G = c I + d P.
struct GateCoeffs {
    cplx c;
    cplx d;
};

/// exp(-i theta P) for real time, exp(-theta P) for imaginary time.
inline GateCoeffs pauli_exp_coeffs(double theta, TimeKind kind) {
    if (kind == TimeKind::real) return {cplx(std::cos(theta), 0), cplx(0, -std::sin(theta))};
    return {cplx(std::cosh(theta), 0), cplx(-std::sinh(theta), 0)};
}

/// out = (c I + d P) in, column by column. `in` and `out` must not alias.
inline void apply_gate_left(const PauliAction &p, GateCoeffs g, const cplx *in, cplx *out, size_t d, size_t cols) {
    thread_local std::vector<cplx> ph;
    p.phase_table(d, ph);
    for (size_t b = 0; b < cols; b++) {
        const cplx *src = in + b * d;
        cplx *dst = out + b * d;
        for (size_t a = 0; a < d; a++) {
            size_t s = a ^ p.x;
            dst[a] = g.c * src[a] + g.d * ph[s] * src[s];
        }
    }
}

inline void apply_gate(const PauliAction &p, GateCoeffs g, Vec &psi, Vec &work) {
    work.resize(psi.size());
    apply_gate_left(p, g, psi.data(), work.data(), psi.size(), 1);
    psi.swap(work);
}

inline void apply_gate_left(const PauliAction &p, GateCoeffs g, Mat &m, Mat &work) {
    work.resize(m.rows(), m.cols());
    apply_gate_left(p, g, m.data(), work.data(), m.rows(), m.cols());
    m.swap(work);
}

/// rho <- G rho G^dagger with G = c I + d P.
inline void conjugate_gate(const PauliAction &p, GateCoeffs g, Mat &rho, Mat &work) {
    const size_t d = rho.rows();
    work.resize(d, d);
    thread_local std::vector<cplx> ph;
    p.phase_table(d, ph);
    const double cc = std::norm(g.c);
    const double dd = std::norm(g.d);
    const cplx dc = g.d * std::conj(g.c);
    const cplx cd = g.c * std::conj(g.d);
    for (size_t b = 0; b < d; b++) {
        const size_t bx = b ^ p.x;
        const cplx *col = rho.data() + b * d;
        const cplx *colx = rho.data() + bx * d;
        const cplx phb = ph[b];
        cplx *dst = work.data() + b * d;
        for (size_t a = 0; a < d; a++) {
            const size_t ax = a ^ p.x;
            const cplx pha = ph[ax];
            dst[a] = cc * col[a] + dc * pha * col[ax] + cd * colx[a] * phb + dd * pha * colx[ax] * phb;
        }
    }
    rho.swap(work);
}

/// Averaged single-sample QDrift map
///     rho <- sum_i p_i G_i rho G_i^dagger,  G_i = exp(-i theta P_i) or exp(-theta P_i),
/// with one shared angle theta. Expanding G_i and summing gives
///     alpha rho + gamma sum_i p_i P_i rho P_i + kappa H rho + conj(kappa) rho H
/// with H = sum_i h_i P_i. Terms sharing an x mask are merged into lookup tables,
/// so the cost is two passes over rho per distinct x mask.
class QDriftMap {
   public:
    QDriftMap() = default;

    explicit QDriftMap(const HamiltonianSum &b) : n_(b.n_qubits), lambda_(b.lambda()) {
        require(!b.empty(), ErrorCode::empty_hamiltonian, "QDrift needs a non-empty term set");
        require(lambda_ > 0, ErrorCode::invalid_argument, "QDrift needs lambda > 0");
        check_dense_size(n_);
        const size_t d = size_t{1} << n_;
        std::map<uint64_t, size_t> index;
        for (const auto &t : b.terms) {
            auto it = index.find(t.x_mask);
            if (it == index.end()) {
                it = index.emplace(t.x_mask, groups_.size()).first;
                groups_.push_back({t.x_mask, std::vector<double>(d, 0.0), std::vector<cplx>(d, 0.0)});
            }
            Group &g = groups_[it->second];
            const double p = t.coeff / lambda_;
            const cplx w = t.coeff * t.phase0();
            for (size_t k = 0; k < d; k++) {
                const bool odd = std::popcount(k & t.z_mask) & 1;
                g.f[k] += odd ? -p : p;
                g.t[k] += odd ? -w : w;
            }
        }
    }

    double lambda() const { return lambda_; }
    size_t group_count() const { return groups_.size(); }

    /// One averaged sample with rotation angle theta on the unit strings.
    void apply(Mat &rho, double theta, TimeKind kind, Mat &work, Mat &y) const {
        const size_t d = rho.rows();
        double alpha, gamma;
        cplx kappa;
        if (kind == TimeKind::real) {
            const double c = std::cos(theta), s = std::sin(theta);
            alpha = c * c;
            gamma = s * s;
            kappa = cplx(0, -c * s / lambda_);
        } else {
            const double c = std::cosh(theta), s = std::sinh(theta);
            alpha = c * c;
            gamma = s * s;
            kappa = cplx(-c * s / lambda_, 0);
        }
        work.setZero(d, d);
        y.setZero(d, d);
        for (const Group &g : groups_) {
            const size_t x = g.x;
            const double *f = g.f.data();
            const cplx *tt = g.t.data();
            for (size_t b = 0; b < d; b++) {
                const cplx *col = rho.data() + b * d;
                const cplx *colx = rho.data() + (b ^ x) * d;
                cplx *m = work.data() + b * d;
                cplx *yy = y.data() + b * d;
                for (size_t a = 0; a < d; a++) {
                    const size_t ax = a ^ x;
                    m[a] += f[a ^ b] * colx[ax];
                    yy[a] += tt[ax] * col[ax];
                }
            }
        }
        const cplx kbar = std::conj(kappa);
        for (size_t b = 0; b < d; b++) {
            for (size_t a = 0; a < d; a++) {
                work(a, b) = alpha * rho(a, b) + gamma * work(a, b) + kappa * y(a, b) + kbar * std::conj(y(b, a));
            }
        }
        rho.swap(work);
    }

   private:
    struct Group {
        uint64_t x;
        std::vector<double> f;  // sum_i p_i (-1)^{|k & z_i|}
        std::vector<cplx> t;    // sum_i h_i ph0_i (-1)^{|j & z_i|}
    };
    int n_ = 0;
    double lambda_ = 0;
    std::vector<Group> groups_;
};

/// Hermitian eigendecomposition of a dense Hamiltonian, reused for every time.
class ExactEvolver {
   public:
    ExactEvolver() = default;
    explicit ExactEvolver(const HamiltonianSum &h) {
        Eigen::SelfAdjointEigenSolver<Mat> es(dense(h));
        evals_ = es.eigenvalues();
        evecs_ = es.eigenvectors();
    }

    /// exp(-i H t) or exp(-H t).
    Mat propagator(double t, TimeKind kind) const {
        Vec f(evals_.size());
        for (Eigen::Index i = 0; i < evals_.size(); i++) {
            f(i) = kind == TimeKind::real ? std::exp(cplx(0, -evals_(i) * t)) : cplx(std::exp(-evals_(i) * t), 0);
        }
        return evecs_ * f.asDiagonal() * evecs_.adjoint();
    }

    Vec apply(const Vec &psi, double t, TimeKind kind) const {
        Vec c = evecs_.adjoint() * psi;
        for (Eigen::Index i = 0; i < evals_.size(); i++) {
            c(i) *= kind == TimeKind::real ? std::exp(cplx(0, -evals_(i) * t)) : cplx(std::exp(-evals_(i) * t), 0);
        }
        return evecs_ * c;
    }

    const Eigen::VectorXd &eigenvalues() const { return evals_; }

   private:
    Eigen::VectorXd evals_;
    Mat evecs_;
};

/// exp(-i t M) or exp(-t M) of a Hermitian matrix by eigendecomposition.
inline Mat hermitian_exp(const Mat &m, double t, TimeKind kind) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    Vec f(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); i++) {
        double e = es.eigenvalues()(i);
        f(i) = kind == TimeKind::real ? std::exp(cplx(0, -e * t)) : cplx(std::exp(-e * t), 0);
    }
    return es.eigenvectors() * f.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace composim
