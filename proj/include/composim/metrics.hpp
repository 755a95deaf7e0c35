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
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "composim/propagators.hpp"

namespace composim {

enum class MeasureKind { trace_distance, infidelity_exact, infidelity_mc };

struct ErrorMeasure {
    MeasureKind kind = MeasureKind::trace_distance;
    int samples = 1000;  // infidelity_mc only
    uint64_t seed = 0;   // infidelity_mc only

    void validate() const {
        if (kind == MeasureKind::infidelity_mc) require(samples >= 1, ErrorCode::invalid_argument, "MC samples must be >= 1");
    }
};

inline const char *measure_name(MeasureKind k) {
    switch (k) {
        case MeasureKind::trace_distance: return "trace_distance";
        case MeasureKind::infidelity_exact: return "infidelity_exact";
        case MeasureKind::infidelity_mc: return "infidelity_mc";
    }
    return "?";
}

// Distances ---------------------------------------------------------------------

/// ||rho - sigma||_1 = sum |eig(rho - sigma)|. No 1/2, so the range is [0, 2].
inline double trace_distance(const Mat &rho, const Mat &sigma) {
    require(rho.rows() == sigma.rows() && rho.cols() == sigma.cols(), ErrorCode::dimension_mismatch, "trace_distance dimension mismatch");
    Mat diff = rho - sigma;
    diff = 0.5 * (diff + diff.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(diff, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

/// 1 - |<psi|phi>|^2 for unit vectors, computed as ||(1 - |psi><psi|) phi||^2
/// so that tiny values keep their relative precision.
inline double pure_infidelity(const Vec &psi, const Vec &phi) {
    require(psi.size() == phi.size(), ErrorCode::dimension_mismatch, "state dimension mismatch");
    Vec perp = phi - psi * psi.dot(phi);
    return perp.squaredNorm();
}

/// Trace distance of two pure states: 2 sqrt(1 - |<psi|phi>|^2).
inline double trace_distance(const Vec &psi, const Vec &phi) { return 2 * std::sqrt(pure_infidelity(psi, phi)); }

/// 1 - <psi|rho|psi>.
inline double infidelity(const Mat &rho, const Vec &psi) {
    require(rho.rows() == psi.size(), ErrorCode::dimension_mismatch, "infidelity dimension mismatch");
    return 1.0 - psi.dot(rho * psi).real();
}

inline double purity(const Mat &rho) { return (rho * rho).trace().real(); }

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, with the Tr(rho sigma)
/// shortcut when either input is pure.
inline double fidelity(const Mat &rho, const Mat &sigma) {
    require(rho.rows() == sigma.rows(), ErrorCode::dimension_mismatch, "fidelity dimension mismatch");
    auto check_psd = [](const Mat &m, Eigen::SelfAdjointEigenSolver<Mat> &es) {
        es.compute(0.5 * (m + m.adjoint()));
        require(es.eigenvalues().minCoeff() >= -1e-10, ErrorCode::invalid_argument, "fidelity input is not positive semidefinite");
    };
    Eigen::SelfAdjointEigenSolver<Mat> er, es;
    check_psd(rho, er);
    check_psd(sigma, es);
    if (purity(rho) >= 1 - 1e-10 || purity(sigma) >= 1 - 1e-10) return (rho * sigma).trace().real();
    // Eigenvalues at rounding level carry no information but their square
    // roots would; they are zeroed.
    auto root = [](const Eigen::VectorXd &ev) {
        const double cut = 1e-13 * std::max(1.0, ev.cwiseAbs().maxCoeff());
        Eigen::VectorXd out = ev;
        for (auto &x : out) x = x < cut ? 0.0 : std::sqrt(x);
        return out;
    };
    Mat sq = er.eigenvectors() * root(er.eigenvalues()).asDiagonal() * er.eigenvectors().adjoint();
    Mat m = sq * sigma * sq;
    Eigen::SelfAdjointEigenSolver<Mat> em(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    double tr = root(em.eigenvalues()).sum();
    return tr * tr;
}

struct McEstimate {
    double mean = 0;
    double stderr_ = 0;
    int samples = 0;
};

/// Monte-Carlo estimate of 1 - F between a (possibly sampled) channel's output
/// and the exact real-time output, averaging branch infidelities over sampled
/// trajectories. Only state vectors are touched.
inline McEstimate infidelity_mc(const HamiltonianSum &h, const Partition &part, const ChannelSpec &spec, const Vec &psi, int samples,
                                uint64_t seed) {
    require(spec.time_kind == TimeKind::real, ErrorCode::invalid_argument, "infidelity_mc is real-time only");
    require(samples >= 1, ErrorCode::invalid_argument, "infidelity_mc needs samples >= 1");
    ChannelEngine eng(h, part, spec);
    ExactEvolver ex(h);
    Vec target = ex.apply(psi, spec.duration, TimeKind::real);
    McEstimate est;
    est.samples = eng.deterministic() ? 1 : samples;
    std::mt19937_64 rng(seed);
    double s1 = 0, s2 = 0;
    for (int k = 0; k < est.samples; k++) {
        Vec out = eng.apply_trajectory(psi, spec.duration, spec.r, rng);
        double v = pure_infidelity(target, out);
        s1 += v;
        s2 += v * v;
    }
    est.mean = s1 / est.samples;
    if (est.samples > 1) {
        double var = std::max(0.0, (s2 - s1 * s1 / est.samples) / (est.samples - 1));
        est.stderr_ = std::sqrt(var / est.samples);
    }
    return est;
}

using ChannelFn = std::function<Mat(const Mat &)>;

/// Lower bound on the induced 1->1 distance: max trace distance of the two
/// outputs over `trials` Haar-random pure inputs.
inline double induced_one_norm_distance(const ChannelFn &a, const ChannelFn &b, size_t dim, int trials, uint64_t seed) {
    require(trials >= 1, ErrorCode::invalid_argument, "need at least one trial");
    std::mt19937_64 seeder(seed);
    double best = 0;
    for (int k = 0; k < trials; k++) {
        Mat rho = pure_density(random_state(dim, seeder()));
        best = std::max(best, trace_distance(a(rho), b(rho)));
    }
    return best;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
    require(x.size() == y.size() && x.size() >= 2, ErrorCode::invalid_argument, "slope fit needs >= 2 matched points");
    const size_t n = x.size();
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; i++) {
        require(x[i] > 0 && y[i] > 0, ErrorCode::invalid_argument, "slope fit needs positive data");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < n; i++) {
        double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

// Bound evaluators ------------------------------------------------------------------

struct BoundValue {
    bool applicable = false;
    double value = 0;
    std::string reason;

    static BoundValue ok(double v) { return {true, v, ""}; }
    static BoundValue na(std::string why) { return {false, 0, std::move(why)}; }
};

/// Nested commutator sum over `order + 1` indices,
///     sum h_{g1} ... h_{g(p+1)} || [H_{g(p+1)}, ... [H_{g2}, H_{g1}]] ||.
/// For unit Pauli strings each nested commutator is 0 or 2^p times a string.
inline double alpha_comm(const HamiltonianSum &h, int order) {
    require(order >= 1, ErrorCode::invalid_argument, "alpha_comm needs order >= 1");
    const size_t L = h.size();
    require(std::pow(double(L), order + 1) <= 2e8, ErrorCode::invalid_argument, "alpha_comm: term count too large for this order");
    double total = 0;
    std::function<void(uint64_t, uint64_t, int, double)> rec = [&](uint64_t x, uint64_t z, int depth, double w) {
        if (depth == order) {
            total += w * std::pow(2.0, order);
            return;
        }
        for (const auto &t : h.terms) {
            if ((std::popcount(x & t.z_mask) + std::popcount(z & t.x_mask)) & 1) rec(x ^ t.x_mask, z ^ t.z_mask, depth + 1, w * t.coeff);
        }
    };
    for (const auto &t : h.terms) rec(t.x_mask, t.z_mask, 0, t.coeff);
    return total;
}

/// Imaginary-time QDrift, full form. Needs N > 2 beta lambda / ln 2.
inline BoundValue theorem1_full(double beta, double lambda, double n) {
    if (!(n > 2 * beta * lambda / std::log(2.0))) return BoundValue::na("requires N > 2 beta lambda / ln 2");
    const double b2l2 = beta * beta * lambda * lambda;
    const double e = std::exp(2 * beta * lambda / n);
    const double denom2 = 1 - 2 * b2l2 / (n * n) * e;
    if (!(denom2 > 0)) return BoundValue::na("second geometric series diverges");
    const double t1 = 4 * b2l2 / n * e / (2 - e);
    const double t2 = 2 * (4 * b2l2 * b2l2 / (n * n * n)) * e * e * e / denom2;
    const double t3 = 2 * (2 * b2l2 / n) * e * e;
    return BoundValue::ok(t1 + t2 + t3);
}

inline constexpr double kTheorem1C = 29.71747;

/// Imaginary-time QDrift, linearized form C beta^2 lambda^2 / N.
inline BoundValue theorem1_simplified(double beta, double lambda, double n) {
    if (!(n > 2 * beta * lambda / std::log(2.0))) return BoundValue::na("requires N > 2 beta lambda / ln 2");
    if (!(lambda / n <= 0.01)) return BoundValue::na("requires lambda / N <= 0.01");
    return BoundValue::ok(kTheorem1C * beta * beta * lambda * lambda / n);
}

inline double factorial(int n) {
    double f = 1;
    for (int i = 2; i <= n; i++) f *= i;
    return f;
}

/// Imaginary-time Trotter-Suzuki after r iterations. This is the appendix
/// form (factor 4 and the extra exp(beta lambda / r)), which dominates the
/// headline statement and is what the derivation actually supports.
inline BoundValue theorem2(const HamiltonianSum &h, double beta, int r, int order) {
    if (h.empty()) return BoundValue::ok(0);
    const int u = stages(order);
    const double lam = h.lambda();
    const double hn = spectral_norm(dense(h));
    const double a = alpha_comm(h, order);
    const double br = beta / r;
    const double v = 4 * std::pow(u, order + 1) * a / factorial(order + 1) * std::pow(beta, order + 1) / std::pow(double(r), order) *
                     std::exp(4 * br * u * lam) * std::exp(br * lam) * (std::exp(4 * br * lam) * std::exp(2 * br * hn) + std::exp(2 * br * hn));
    return BoundValue::ok(v);
}

/// Dense spectral norm of [A, B] for the two halves of a partition.
inline double partition_commutator_norm(const HamiltonianSum &h, const Partition &p) {
    if (p.a_ids.empty() || p.b_ids.empty()) return 0;
    Mat a = dense(h.subset(p.a_ids)), b = dense(h.subset(p.b_ids));
    return spectral_norm(a * b - b * a);
}

/// Imaginary-time composite channel, explicit pre-asymptotic form. The QDrift
/// piece uses r times the full QDrift bound at slice beta / r.
inline BoundValue theorem3(const HamiltonianSum &h, const Partition &p, double beta, int r, int order, int nb) {
    const int u = stages(order);
    const double lam = h.lambda();
    if (!(r >= u * beta * lam)) return BoundValue::na("requires r >= Upsilon beta lambda");
    const double br = beta / r;
    double qd = 0;
    if (!p.b_ids.empty()) {
        BoundValue b1 = theorem1_full(br, p.lambda_b(h), nb);
        if (!b1.applicable) return BoundValue::na("QDrift part: " + b1.reason);
        qd = r * b1.value;
    }
    double ts = 0;
    if (!p.a_ids.empty()) ts = theorem2(h.subset(p.a_ids), beta, r, order).value;
    const double comm = partition_commutator_norm(h, p) * std::exp(br * lam) * 2 * beta * beta / r * std::exp(4 * br * lam);
    const double hn = spectral_norm(dense(h));
    return BoundValue::ok((qd + ts + comm) * std::exp(2 * br * hn) * (1 + std::exp(4 * br * lam)));
}

// Analytic cost bounds (gate counts) ------------------------------------------------

inline double pair_commutator_sum(const HamiltonianSum &a, const HamiltonianSum &b) {
    double s = 0;
    for (const auto &x : a.terms)
        for (const auto &y : b.terms) s += commutator_norm(x, y);
    return s;
}

/// First-order Trotter: L ceil(t^2 / (2 eps) sum_ij h_i h_j ||[H_i, H_j]||).
inline double cost_bound_trotter1(const HamiltonianSum &h, double t, double eps) {
    return h.size() * std::max(1.0, std::ceil(t * t / (2 * eps) * pair_commutator_sum(h, h)));
}

/// Order 2k: Upsilon L ceil((Upsilon t)^{1 + 1/2k} / eps^{1/2k} (4 alpha / (2k + 1))^{1/2k}).
inline double cost_bound_trotter2k(const HamiltonianSum &h, double t, double eps, int order) {
    const int u = stages(order);
    const double p = 1.0 / order;
    const double r = std::pow(u * t, 1 + p) / std::pow(eps, p) * std::pow(4 * alpha_comm(h, order) / (order + 1), p);
    return double(u) * h.size() * std::max(1.0, std::ceil(r));
}

/// QDrift: 4 lambda^2 t^2 / eps.
inline double cost_bound_qdrift(double lambda, double t, double eps) { return 4 * lambda * lambda * t * t / eps; }

/// First-order composite: (L_A + N_B) ceil(t^2/eps (1/2 sum a a ||[A,A]|| + 1/2 sum a b ||[A,B]|| + 4 lambda_B^2 / N_B)).
inline double cost_bound_composite1(const HamiltonianSum &h, const Partition &p, double t, double eps, int nb) {
    HamiltonianSum a = h.subset(p.a_ids), b = h.subset(p.b_ids);
    const double lb = b.lambda();
    const double r = t * t / eps * (0.5 * pair_commutator_sum(a, a) + 0.5 * pair_commutator_sum(a, b) + (b.empty() ? 0 : 4 * lb * lb / nb));
    return (a.size() + (b.empty() ? 0 : nb)) * std::max(1.0, std::ceil(r));
}

}  // namespace composim
