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
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "composim/kernels.hpp"
#include "composim/partition.hpp"

namespace composim {

enum class ChannelKind { exact, trotter, qdrift, composite };

inline const char *channel_kind_name(ChannelKind k) {
    switch (k) {
        case ChannelKind::exact: return "exact";
        case ChannelKind::trotter: return "trotter";
        case ChannelKind::qdrift: return "qdrift";
        case ChannelKind::composite: return "composite";
    }
    return "?";
}

struct ChannelSpec {
    ChannelKind kind = ChannelKind::trotter;
    TimeKind time_kind = TimeKind::real;
    double duration = 1;
    int inner_order = 1;
    int outer_order = 1;
    int r = 1;
    int nb = 1;
};

/// Stage count of the order-2k formula: 1 for first order, 2 * 5^(k-1) otherwise.
inline int stages(int order) {
    require(order == 1 || (order >= 2 && order % 2 == 0), ErrorCode::invalid_argument,
            "product formula order must be 1 or even, got " + std::to_string(order));
    if (order == 1) return 1;
    int u = 2;
    for (int k = 1; k < order / 2; k++) u *= 5;
    return u;
}

/// Suzuki fractal coefficient for building order 2k from order 2k - 2.
inline double suzuki_s(int order) { return 1.0 / (4.0 - std::pow(4.0, 1.0 / (order - 1))); }

struct StageGate {
    int term;     // index into the term list the sequence was built for
    double frac;  // multiple of the time slice
};

/// Gate sequence of one step of the order-`order` formula on terms 0..L-1,
/// listed in application order. Every term's fractions sum to 1.
inline std::vector<StageGate> trotter_sequence(size_t L, int order) {
    stages(order);
    std::vector<StageGate> seq;
    if (order == 1) {
        for (size_t j = 0; j < L; j++) seq.push_back({static_cast<int>(j), 1.0});
        return seq;
    }
    if (order == 2) {
        for (size_t j = 0; j < L; j++) seq.push_back({static_cast<int>(j), 0.5});
        for (size_t j = L; j-- > 0;) seq.push_back({static_cast<int>(j), 0.5});
        return seq;
    }
    auto inner = trotter_sequence(L, order - 2);
    const double s = suzuki_s(order);
    const double w[5] = {s, s, 1 - 4 * s, s, s};
    for (double f : w) {
        for (const auto &g : inner) seq.push_back({g.term, g.frac * f});
    }
    return seq;
}

inline void validate_spec(const ChannelSpec &s) {
    require(std::isfinite(s.duration) && s.duration >= 0, ErrorCode::invalid_argument, "duration must be finite and >= 0");
    require(s.r >= 1, ErrorCode::invalid_argument, "iterations r must be >= 1");
    stages(s.inner_order);
    require(s.outer_order == 1 || s.outer_order == 2, ErrorCode::invalid_argument, "outer order must be 1 or 2");
    if (s.kind == ChannelKind::qdrift || s.kind == ChannelKind::composite) {
        require(s.nb >= 1, ErrorCode::invalid_argument, "QDrift sample count must be >= 1");
    }
}

inline Mat pure_density(const Vec &psi) { return psi * psi.adjoint(); }

/// Uniformly random pure state (normalized complex Gaussian vector).
inline Vec random_state(size_t d, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Vec v(d);
    for (size_t i = 0; i < d; i++) {
        double re = g(rng);
        double im = g(rng);
        v(i) = cplx(re, im);
    }
    return v / v.norm();
}

/// Trotter, QDrift or composite channel compiled for one Hamiltonian and
/// partition. Everything that does not depend on (duration, r) is built once,
/// which is what the r-search needs.
class ChannelEngine {
   public:
    ChannelEngine(const HamiltonianSum &h, const Partition &part, const ChannelSpec &spec) : h_(h), spec_(spec) {
        validate_spec(spec);
        h.validate();
        require(!h.empty(), ErrorCode::empty_hamiltonian, "channel on an empty Hamiltonian");
        check_dense_size(h.n_qubits);
        switch (spec.kind) {
            case ChannelKind::exact:
                exact_ = ExactEvolver(h);
                return;
            case ChannelKind::trotter:
                part_ = Partition::all_trotter(h);
                break;
            case ChannelKind::qdrift:
                part_ = Partition::all_qdrift(h);
                break;
            case ChannelKind::composite:
                part.validate(h);
                part_ = part;
                break;
        }
        for (int i : part_.a_ids) a_actions_.push_back(PauliAction::of(h.terms[i]));
        seq_ = trotter_sequence(part_.a_ids.size(), spec.inner_order);
        if (!part_.b_ids.empty()) {
            HamiltonianSum b = h.subset(part_.b_ids);
            qd_ = QDriftMap(b);
            lambda_b_ = b.lambda();
            b_probs_.reserve(b.size());
            for (const auto &t : b.terms) {
                b_probs_.push_back(t.coeff / lambda_b_);
                b_actions_.push_back(PauliAction::of(t));
            }
        }
    }

    const ChannelSpec &spec() const { return spec_; }
    const Partition &partition() const { return part_; }
    const HamiltonianSum &hamiltonian() const { return h_; }
    const std::vector<StageGate> &sequence() const { return seq_; }
    double lambda_b() const { return lambda_b_; }
    const std::vector<double> &b_probabilities() const { return b_probs_; }

    bool has_qdrift() const { return spec_.kind != ChannelKind::exact && !part_.b_ids.empty(); }
    /// True when the channel is a single unitary (or single operator), so pure
    /// inputs stay pure.
    bool deterministic() const { return !has_qdrift(); }

    int b_multiplicity() const {
        if (spec_.kind == ChannelKind::qdrift) return 1;
        return spec_.outer_order == 2 ? 2 : 1;
    }

    /// Exponentials applied by r iterations.
    long long gate_count(int r) const {
        if (spec_.kind == ChannelKind::exact) return 0;
        long long per = static_cast<long long>(seq_.size());
        if (has_qdrift()) per += static_cast<long long>(b_multiplicity()) * spec_.nb;
        return per * r;
    }

    /// Density-matrix channel output after r iterations of slice duration / r.
    Mat apply(const Mat &rho_in, double duration, int r) const {
        require(rho_in.rows() == static_cast<Eigen::Index>(h_.dim()) && rho_in.cols() == rho_in.rows(),
                ErrorCode::dimension_mismatch, "density matrix does not match the Hamiltonian dimension");
        require(r >= 1, ErrorCode::invalid_argument, "r must be >= 1");
        const TimeKind tk = spec_.time_kind;
        if (spec_.kind == ChannelKind::exact) {
            Mat k = exact_.propagator(duration, tk);
            Mat out = k * rho_in * k.adjoint();
            if (tk == TimeKind::imaginary) out /= out.trace().real();
            return out;
        }
        const double slice = duration / r;
        Mat rho = rho_in, work, y;
        for (int it = 0; it < r; it++) {
            if (has_qdrift() && spec_.outer_order == 2) qdrift_pass(rho, slice / 2, work, y);
            trotter_pass(rho, slice, work);
            if (has_qdrift()) qdrift_pass(rho, spec_.outer_order == 2 ? slice / 2 : slice, work, y);
            if (tk == TimeKind::imaginary) rho /= rho.trace().real();
        }
        return rho;
    }

    /// Pure-state output; only valid for deterministic channels.
    Vec apply(const Vec &psi_in, double duration, int r) const {
        require(deterministic(), ErrorCode::invalid_argument, "state-vector path needs a channel without QDrift");
        require(psi_in.size() == static_cast<Eigen::Index>(h_.dim()), ErrorCode::dimension_mismatch,
                "state does not match the Hamiltonian dimension");
        if (spec_.kind == ChannelKind::exact) {
            Vec out = exact_.apply(psi_in, duration, spec_.time_kind);
            if (spec_.time_kind == TimeKind::imaginary) out /= out.norm();
            return out;
        }
        const double slice = duration / r;
        Vec psi = psi_in, work;
        for (int it = 0; it < r; it++) {
            for (const auto &g : seq_) apply_gate(a_actions_[g.term], trotter_coeffs(g, slice), psi, work);
            if (spec_.time_kind == TimeKind::imaginary) psi /= psi.norm();
        }
        return psi;
    }

    /// One sampled trajectory applied to a state, unnormalized. The sample
    /// stream matches trajectory_operator for the same rng state.
    Vec apply_trajectory(const Vec &psi_in, double duration, int r, std::mt19937_64 &rng) const {
        Vec psi = psi_in, work;
        walk_trajectory(duration, r, rng, [&](const PauliAction &p, GateCoeffs g) { apply_gate(p, g, psi, work); });
        return psi;
    }

    /// Product of every exponential along one sampled trajectory (no trace
    /// normalization).
    Mat trajectory_operator(double duration, int r, std::mt19937_64 &rng) const {
        Mat k = Mat::Identity(h_.dim(), h_.dim()), work;
        walk_trajectory(duration, r, rng, [&](const PauliAction &p, GateCoeffs g) { apply_gate_left(p, g, k, work); });
        return k;
    }

    /// Samples one term id (index into the B list) from p_j = b_j / lambda_B.
    int sample_b(std::mt19937_64 &rng) const {
        std::discrete_distribution<int> dist(b_probs_.begin(), b_probs_.end());
        return dist(rng);
    }

   private:
    GateCoeffs trotter_coeffs(const StageGate &g, double slice) const {
        return pauli_exp_coeffs(g.frac * slice * h_.terms[part_.a_ids[g.term]].coeff, spec_.time_kind);
    }

    void trotter_pass(Mat &rho, double slice, Mat &work) const {
        for (const auto &g : seq_) conjugate_gate(a_actions_[g.term], trotter_coeffs(g, slice), rho, work);
    }

    void qdrift_pass(Mat &rho, double duration, Mat &work, Mat &y) const {
        const double theta = lambda_b_ * duration / spec_.nb;
        for (int s = 0; s < spec_.nb; s++) qd_.apply(rho, theta, spec_.time_kind, work, y);
    }

    template <typename F>
    void walk_trajectory(double duration, int r, std::mt19937_64 &rng, F &&gate) const {
        require(spec_.kind != ChannelKind::exact, ErrorCode::invalid_argument, "exact channel has no trajectory");
        const double slice = duration / r;
        std::discrete_distribution<int> dist(b_probs_.begin(), b_probs_.end());
        auto b_half = [&](double dur) {
            const GateCoeffs gc = pauli_exp_coeffs(lambda_b_ * dur / spec_.nb, spec_.time_kind);
            for (int s = 0; s < spec_.nb; s++) gate(b_actions_[dist(rng)], gc);
        };
        for (int it = 0; it < r; it++) {
            if (has_qdrift() && spec_.outer_order == 2) b_half(slice / 2);
            for (const auto &g : seq_) gate(a_actions_[g.term], trotter_coeffs(g, slice));
            if (has_qdrift()) b_half(spec_.outer_order == 2 ? slice / 2 : slice);
        }
    }

    HamiltonianSum h_;
    ChannelSpec spec_;
    Partition part_;
    ExactEvolver exact_;
    std::vector<PauliAction> a_actions_;
    std::vector<PauliAction> b_actions_;
    std::vector<StageGate> seq_;
    QDriftMap qd_;
    double lambda_b_ = 0;
    std::vector<double> b_probs_;
};

// Free-function surface ------------------------------------------------------

inline Mat exact_channel(const HamiltonianSum &h, const ChannelSpec &spec, const Mat &rho) {
    ChannelSpec s = spec;
    s.kind = ChannelKind::exact;
    return ChannelEngine(h, Partition{}, s).apply(rho, spec.duration, 1);
}

/// Dense operator of one order-`order` step with slice tau.
inline Mat trotter_step(const HamiltonianSum &h, int order, double tau, TimeKind kind) {
    require(tau != 0, ErrorCode::invalid_argument, "trotter_step needs tau != 0");
    check_dense_size(h.n_qubits);
    Mat k = Mat::Identity(h.dim(), h.dim()), work;
    for (const auto &g : trotter_sequence(h.size(), order)) {
        const auto &t = h.terms[g.term];
        apply_gate_left(PauliAction::of(t), pauli_exp_coeffs(g.frac * tau * t.coeff, kind), k, work);
    }
    return k;
}

inline Mat trotter_channel(const HamiltonianSum &h, const ChannelSpec &spec, const Mat &rho) {
    ChannelSpec s = spec;
    s.kind = ChannelKind::trotter;
    return ChannelEngine(h, Partition{}, s).apply(rho, spec.duration, spec.r);
}

/// N = spec.nb averaged samples per iteration, r iterations.
inline Mat qdrift_channel_exact(const HamiltonianSum &h, const ChannelSpec &spec, const Mat &rho) {
    ChannelSpec s = spec;
    s.kind = ChannelKind::qdrift;
    return ChannelEngine(h, Partition{}, s).apply(rho, spec.duration, spec.r);
}

/// N i.i.d. term ids drawn from p_i = h_i / lambda.
inline std::vector<int> qdrift_sample(const HamiltonianSum &h, int n, uint64_t seed) {
    require(n >= 1, ErrorCode::invalid_argument, "qdrift_sample needs N >= 1");
    require(!h.empty() && h.lambda() > 0, ErrorCode::empty_hamiltonian, "qdrift_sample needs lambda > 0");
    std::vector<double> w;
    for (const auto &t : h.terms) w.push_back(t.coeff);
    std::discrete_distribution<int> dist(w.begin(), w.end());
    std::mt19937_64 rng(seed);
    std::vector<int> out(n);
    for (auto &j : out) j = dist(rng);
    return out;
}

inline Mat composite_channel(const HamiltonianSum &h, const Partition &part, const ChannelSpec &spec, const Mat &rho) {
    ChannelSpec s = spec;
    s.kind = ChannelKind::composite;
    return ChannelEngine(h, part, s).apply(rho, spec.duration, spec.r);
}

inline long long gate_count(const HamiltonianSum &h, const ChannelSpec &spec, const Partition &part) {
    validate_spec(spec);
    switch (spec.kind) {
        case ChannelKind::exact: return 0;
        case ChannelKind::trotter: return static_cast<long long>(stages(spec.inner_order)) * h.size() * spec.r;
        case ChannelKind::qdrift: return static_cast<long long>(spec.nb) * spec.r;
        case ChannelKind::composite: {
            part.validate(h);
            long long per = static_cast<long long>(stages(spec.inner_order)) * part.a_ids.size();
            if (!part.b_ids.empty()) per += (spec.outer_order == 2 ? 2LL : 1LL) * spec.nb;
            return per * spec.r;
        }
    }
    return 0;
}

// Algorithm 1 export -----------------------------------------------------------

struct PropagatorOp {
    bool qdrift;       // false: Trotter pass entry, true: QDrift pass entry
    int term;          // id in the full Hamiltonian
    double prefactor;  // Trotter: stage fraction; QDrift: lambda_B / (N_B r)
    double slice;      // Trotter: beta / r; QDrift: beta
};

/// Ordered list of imaginary-time propagators. Entry k stands for
///     exp(-prefactor * slice * w * P_term),  w = h_term (Trotter) or 1 (QDrift),
/// with P the signed unit string. Entries are listed in application order.
struct PropagatorList {
    std::vector<PropagatorOp> ops;
    uint64_t seed = 0;
    double beta = 0;
    int r = 1;
    int nb = 1;
    int inner_order = 1;
    double omega_c = 0;
    std::vector<int> a_ids, b_ids;

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto &o : ops) {
            arr.push_back({{"pass", o.qdrift ? "qdrift" : "trotter"}, {"term", o.term}, {"prefactor", o.prefactor}, {"slice", o.slice}});
        }
        return {{"meta",
                 {{"seed", seed},
                  {"beta", beta},
                  {"r", r},
                  {"Nb", nb},
                  {"inner_order", inner_order},
                  {"omega_c", omega_c},
                  {"a_ids", a_ids},
                  {"b_ids", b_ids},
                  {"operator", "exp(-prefactor*slice*w*P), w = |coeff| for trotter entries, 1 for qdrift entries"}}},
                {"ops", arr}};
    }
};

inline PropagatorList export_propagator_list(const HamiltonianSum &h, const Partition &part, double beta, int r, int order, int nb,
                                             uint64_t seed) {
    require(beta > 0, ErrorCode::invalid_argument, "export needs beta > 0");
    require(nb >= 1, ErrorCode::invalid_argument, "export needs N_B >= 1");
    require(!part.b_ids.empty(), ErrorCode::invalid_argument, "export needs a non-empty QDrift set");
    ChannelSpec s;
    s.kind = ChannelKind::composite;
    s.time_kind = TimeKind::imaginary;
    s.duration = beta;
    s.r = r;
    s.inner_order = order;
    s.nb = nb;
    ChannelEngine eng(h, part, s);
    PropagatorList out;
    out.seed = seed;
    out.beta = beta;
    out.r = r;
    out.nb = nb;
    out.inner_order = order;
    out.omega_c = part.omega_c;
    out.a_ids = eng.partition().a_ids;
    out.b_ids = eng.partition().b_ids;
    std::mt19937_64 rng(seed);
    std::discrete_distribution<int> dist(eng.b_probabilities().begin(), eng.b_probabilities().end());
    const double slice = beta / r;
    for (int m = 0; m < r; m++) {
        for (const auto &g : eng.sequence()) out.ops.push_back({false, out.a_ids[g.term], g.frac, slice});
        for (int j = 0; j < nb; j++) out.ops.push_back({true, out.b_ids[dist(rng)], eng.lambda_b() / (nb * r), beta});
    }
    return out;
}

/// Trajectory operator that export_propagator_list(seed) describes, built
/// through the matrix-free gate kernels.
inline Mat composite_trajectory_operator(const HamiltonianSum &h, const Partition &part, double beta, int r, int order, int nb,
                                         uint64_t seed) {
    ChannelSpec s;
    s.kind = ChannelKind::composite;
    s.time_kind = TimeKind::imaginary;
    s.inner_order = order;
    s.nb = nb;
    ChannelEngine eng(h, part, s);
    std::mt19937_64 rng(seed);
    return eng.trajectory_operator(beta, r, rng);
}

struct PartitionEstimate {
    double z_est = 0;
    double stderr_ = 0;
    double z_exact = 0;
    int samples = 0;
};

/// Z = Tr exp(-beta H) estimated as the mean trace of sampled trajectory
/// operators; the exact value comes from diagonalization.
inline PartitionEstimate estimate_partition_function(const HamiltonianSum &h, const Partition &part, double beta, int r, int order,
                                                     int nb, int samples, uint64_t seed) {
    require(samples >= 1, ErrorCode::invalid_argument, "need at least one sample");
    ChannelSpec s;
    s.kind = ChannelKind::composite;
    s.time_kind = TimeKind::imaginary;
    s.inner_order = order;
    s.nb = nb;
    ChannelEngine eng(h, part, s);
    PartitionEstimate out;
    out.samples = eng.deterministic() ? 1 : samples;
    std::mt19937_64 rng(seed);
    double s1 = 0, s2 = 0;
    for (int k = 0; k < out.samples; k++) {
        double z = eng.trajectory_operator(beta, r, rng).trace().real();
        s1 += z;
        s2 += z * z;
    }
    out.z_est = s1 / out.samples;
    if (out.samples > 1) out.stderr_ = std::sqrt(std::max(0.0, (s2 - s1 * s1 / out.samples) / (out.samples - 1)) / out.samples);
    out.z_exact = hermitian_exp(dense(h), beta, TimeKind::imaginary).trace().real();
    return out;
}

}  // namespace composim
