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
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "composim/metrics.hpp"

namespace composim {

inline constexpr int kDefaultRMax = 1 << 16;

struct CostQuery {
    HamiltonianSum h;
    ChannelSpec spec;  // kind, time_kind, orders, nb; duration and r are ignored
    Partition partition;
    double epsilon = 1e-3;
    double duration = 1;
    ErrorMeasure measure;
    uint64_t state_seed = 0;
    int r_max = kDefaultRMax;

    void validate() const {
        require(epsilon > 0 && epsilon < 2, ErrorCode::invalid_argument, "epsilon must lie in (0, 2)");
        require(duration > 0, ErrorCode::invalid_argument, "duration must be > 0");
        require(r_max >= 1, ErrorCode::invalid_argument, "r_max must be >= 1");
        require(spec.kind != ChannelKind::exact, ErrorCode::invalid_argument, "cannot cost the exact channel");
        measure.validate();
    }
};

struct SearchResult {
    bool converged = false;
    int r = 0;
    long long gates = 0;
    double epsilon = 0;  // at r when converged, best seen otherwise
    bool monotone_violation = false;
    bool fallback_scan = false;
    int evaluations = 0;
};

/// Smallest r in [1, r_max] with eps(r) <= thr. The upper end grows until the
/// threshold is met: by doubling, or by a jump to 1.1x the r predicted from the
/// log-log slope of the last two points when that slope is usable. The bracket
/// is then closed by bisection whose split comes from log-log interpolation of
/// the ends, followed by a probe next to the side that moved. A round that
/// does not shrink the bracket fourfold falls back to a plain midpoint. If
/// eps(r + 1) is back above the threshold, a bounded linear scan from r = 1
/// decides instead.
inline SearchResult search_min_r(const std::function<double(int)> &eps, double thr, int r_max, int scan_limit = 4096) {
    std::map<int, double> seen;
    auto at = [&](int r) {
        auto it = seen.find(r);
        if (it != seen.end()) return it->second;
        double e = eps(r);
        seen.emplace(r, e);
        return e;
    };
    auto log_interp = [&](int r0, int r1, double target) {
        const double e0 = std::max(at(r0), 1e-300), e1 = std::max(at(r1), 1e-300);
        double f = (std::log(e0) - std::log(target)) / (std::log(e0) - std::log(e1));
        return std::exp(std::log(double(r0)) + f * (std::log(double(r1)) - std::log(double(r0))));
    };
    SearchResult res;
    int lo = 0, hi = 1;
    while (at(hi) > thr) {
        if (hi >= r_max) break;
        long long next = 2LL * hi;
        if (lo >= 1 && at(lo) > at(hi) && at(hi) > 0) {
            double slope = (std::log(at(lo)) - std::log(at(hi))) / (std::log(double(hi)) - std::log(double(lo)));
            if (slope > 0.5) {
                double pred = 1.1 * log_interp(lo, hi, thr);
                next = std::clamp<long long>(static_cast<long long>(std::ceil(pred)), hi + 1LL, 16LL * hi);
            }
        }
        lo = hi;
        hi = static_cast<int>(std::min<long long>(next, r_max));
    }
    if (at(hi) > thr) {
        res.converged = false;
        res.r = hi;
        double best = std::numeric_limits<double>::infinity();
        for (auto &kv : seen) best = std::min(best, kv.second);
        res.epsilon = best;
        res.evaluations = static_cast<int>(seen.size());
        return res;
    }
    // lo is the largest evaluated r below the threshold's far side.
    for (auto &kv : seen) {
        if (kv.first < hi && kv.second > thr) lo = std::max(lo, kv.first);
    }
    bool use_interp = true;
    while (hi - lo > 1) {
        const int width = hi - lo;
        const bool interp = use_interp && lo >= 1 && at(lo) > at(hi);
        int m = lo + width / 2;
        if (interp) m = std::clamp(static_cast<int>(std::ceil(log_interp(lo, hi, thr) - 1e-9)), lo + 1, hi - 1);
        const bool moved_hi = at(m) <= thr;
        (moved_hi ? hi : lo) = m;
        if (interp && hi - lo > 1) {
            const int n = moved_hi ? hi - 1 : lo + 1;
            (at(n) <= thr ? hi : lo) = n;
        }
        use_interp = (hi - lo) * 4 <= width;
    }
    // Neighbour guard: eps(hi + 1) must stay below the threshold too. Any
    // evaluated point above hi that is back over the threshold means eps(r) is
    // not monotone here, and a linear scan from r = 1 decides.
    if (hi < r_max) at(hi + 1);
    double prev = std::numeric_limits<double>::infinity();
    bool crossing = false;
    for (auto &kv : seen) {
        if (kv.second > prev * (1 + 1e-9) + 1e-15) res.monotone_violation = true;
        prev = kv.second;
        if (kv.first > hi && kv.second > thr) crossing = true;
    }
    if (crossing) {
        res.fallback_scan = true;
        const int limit = std::min(hi, scan_limit);
        for (int r = 1; r <= limit; r++) {
            if (at(r) <= thr) {
                hi = r;
                break;
            }
        }
    }
    res.converged = true;
    res.r = hi;
    res.epsilon = at(hi);
    res.evaluations = static_cast<int>(seen.size());
    return res;
}

/// eps(r) for one query. Holds the compiled channel, the initial state and the
/// exact target so repeated r values only pay for the channel itself.
class ErrorEvaluator {
   public:
    ErrorEvaluator(std::shared_ptr<const ChannelEngine> eng, std::shared_ptr<const ExactEvolver> ex, const Vec &psi0, double duration,
                   ErrorMeasure measure)
        : eng_(std::move(eng)), psi0_(psi0), duration_(duration), measure_(measure) {
        target_ = ex->apply(psi0, duration, eng_->spec().time_kind);
        target_ /= target_.norm();
    }

    double operator()(int r) const {
        if (eng_->deterministic()) {
            Vec phi = eng_->apply(psi0_, duration_, r);
            phi /= phi.norm();
            double inf = pure_infidelity(target_, phi);
            return measure_.kind == MeasureKind::trace_distance ? 2 * std::sqrt(inf) : inf;
        }
        if (measure_.kind == MeasureKind::infidelity_mc) {
            require(eng_->spec().time_kind == TimeKind::real, ErrorCode::invalid_argument, "infidelity_mc is real-time only");
            std::mt19937_64 rng(measure_.seed);
            double s = 0;
            for (int k = 0; k < measure_.samples; k++) {
                Vec out = eng_->apply_trajectory(psi0_, duration_, r, rng);
                s += pure_infidelity(target_, out);
            }
            return s / measure_.samples;
        }
        Mat rho = eng_->apply(pure_density(psi0_), duration_, r);
        if (measure_.kind == MeasureKind::trace_distance) return trace_distance(rho, pure_density(target_));
        return infidelity(rho, target_);
    }

    long long gates(int r) const { return eng_->gate_count(r); }
    const ChannelEngine &engine() const { return *eng_; }

   private:
    std::shared_ptr<const ChannelEngine> eng_;
    Vec psi0_;
    Vec target_;
    double duration_;
    ErrorMeasure measure_;
};

/// Shared, duration-independent pieces of a query.
struct CompiledQuery {
    std::shared_ptr<const ChannelEngine> engine;
    std::shared_ptr<const ExactEvolver> exact;
    Vec psi0;

    explicit CompiledQuery(const CostQuery &q) {
        q.validate();
        engine = std::make_shared<const ChannelEngine>(q.h, q.partition, q.spec);
        exact = std::make_shared<const ExactEvolver>(q.h);
        psi0 = random_state(q.h.dim(), q.state_seed);
    }
    CompiledQuery(std::shared_ptr<const ChannelEngine> e, std::shared_ptr<const ExactEvolver> x, Vec p)
        : engine(std::move(e)), exact(std::move(x)), psi0(std::move(p)) {}

    SearchResult find(double duration, double epsilon, const ErrorMeasure &m, int r_max) const {
        ErrorEvaluator ev(engine, exact, psi0, duration, m);
        SearchResult res = search_min_r([&](int r) { return ev(r); }, epsilon, r_max);
        res.gates = ev.gates(res.r);
        return res;
    }
};

inline SearchResult find_min_r(const CostQuery &q) {
    CompiledQuery cq(q);
    return cq.find(q.duration, q.epsilon, q.measure, q.r_max);
}

// Sweeps ----------------------------------------------------------------------

struct CostPoint {
    double duration = 0;
    SearchResult result;
};

struct CostCurve {
    std::string channel;  // trotter, qdrift or composite
    int inner_order = 1;
    int outer_order = 1;
    int nb = 0;
    double omega_c = 0;
    double epsilon = 0;
    TimeKind time_kind = TimeKind::real;
    std::vector<CostPoint> points;
};

/// n log-spaced points in (0, t_max] starting at t_min.
inline std::vector<double> log_grid(double t_min, double t_max, int n) {
    require(n >= 1 && t_min > 0 && t_max >= t_min, ErrorCode::invalid_argument, "bad grid");
    std::vector<double> g(n);
    if (n == 1) {
        g[0] = t_max;
        return g;
    }
    for (int i = 0; i < n; i++) g[i] = t_min * std::pow(t_max / t_min, double(i) / (n - 1));
    g.back() = t_max;
    return g;
}

/// Default grid: 20 log-spaced points up to 3 pi / 2, two decades wide.
inline std::vector<double> default_grid(int n = 20) { return log_grid(3 * M_PI / 2 / 100, 3 * M_PI / 2, n); }

inline CostCurve cost_sweep(const CostQuery &tmpl, const std::vector<double> &grid, int threads) {
    for (size_t i = 1; i < grid.size(); i++) require(grid[i] > grid[i - 1], ErrorCode::invalid_argument, "grid must be strictly increasing");
    CompiledQuery cq(tmpl);
    CostCurve curve;
    curve.channel = channel_kind_name(tmpl.spec.kind);
    curve.inner_order = tmpl.spec.kind == ChannelKind::qdrift ? 0 : tmpl.spec.inner_order;
    curve.outer_order = tmpl.spec.kind == ChannelKind::composite ? tmpl.spec.outer_order : 1;
    curve.nb = cq.engine->has_qdrift() ? tmpl.spec.nb : 0;
    curve.omega_c = cq.engine->partition().omega_c;
    curve.epsilon = tmpl.epsilon;
    curve.time_kind = tmpl.spec.time_kind;
    curve.points.resize(grid.size());
    parallel_for(grid.size(), threads, [&](size_t i) {
        curve.points[i].duration = grid[i];
        curve.points[i].result = cq.find(grid[i], tmpl.epsilon, tmpl.measure, tmpl.r_max);
    });
    return curve;
}

// CSV ---------------------------------------------------------------------------

inline constexpr const char *kCsvHeader = "duration,channel,inner_order,outer_order,Nb,omega_c,r,gates,epsilon";

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Unconverged points are written with gates = -1 and the best epsilon seen.
inline void write_csv_rows(std::ostream &out, const CostCurve &c) {
    for (const auto &p : c.points) {
        out << fmt_double(p.duration) << ',' << c.channel << ',' << c.inner_order << ',' << c.outer_order << ',' << c.nb << ','
            << fmt_double(c.omega_c) << ',' << p.result.r << ',' << (p.result.converged ? p.result.gates : -1) << ','
            << fmt_double(p.result.epsilon) << '\n';
    }
}

inline void write_csv(const std::string &path, const std::vector<CostCurve> &curves) {
    std::ofstream out(path);
    require(out.good(), ErrorCode::io_error, "cannot write " + path);
    out << kCsvHeader << '\n';
    for (const auto &c : curves) write_csv_rows(out, c);
}

/// Reads a cost CSV back. Rows are grouped into curves by consecutive
/// (channel, orders, Nb, omega_c) keys.
inline std::vector<CostCurve> read_csv(const std::string &path) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::io_error, "cannot open " + path);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorCode::parse_error, path + ": empty file");
    require(line == kCsvHeader, ErrorCode::parse_error, path + ": unexpected header");
    std::vector<CostCurve> curves;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        require(f.size() == 9, ErrorCode::parse_error, path + ": expected 9 columns in '" + line + "'");
        try {
            CostCurve key;
            key.channel = f[1];
            key.inner_order = std::stoi(f[2]);
            key.outer_order = std::stoi(f[3]);
            key.nb = std::stoi(f[4]);
            key.omega_c = std::stod(f[5]);
            if (curves.empty() || curves.back().channel != key.channel || curves.back().inner_order != key.inner_order ||
                curves.back().outer_order != key.outer_order || curves.back().nb != key.nb || curves.back().omega_c != key.omega_c) {
                curves.push_back(key);
            }
            CostPoint p;
            p.duration = std::stod(f[0]);
            p.result.r = std::stoi(f[6]);
            p.result.gates = std::stoll(f[7]);
            p.result.converged = p.result.gates >= 0;
            p.result.epsilon = std::stod(f[8]);
            curves.back().points.push_back(p);
        } catch (const std::logic_error &) {
            throw Error(ErrorCode::parse_error, path + ": bad number in '" + line + "'");
        }
    }
    return curves;
}

// Crossover -------------------------------------------------------------------------

struct CrossoverReport {
    bool found = false;
    double t_cross = 0;
    double xi = 0;
    double c_qd = 0;  // interpolated pure-channel cost at t_cross
    double c_x = 0;   // interpolated composite cost at t_cross
    std::string method = "loglog-linear";
};

namespace detail {
inline double loglog_interp(double t0, double c0, double t1, double c1, double t) {
    if (t1 == t0) return c0;
    double f = (std::log(t) - std::log(t0)) / (std::log(t1) - std::log(t0));
    return std::exp(std::log(c0) + f * (std::log(c1) - std::log(c0)));
}

/// Converged (duration, gates) pairs.
inline std::vector<std::pair<double, double>> valid_points(const CostCurve &c) {
    std::vector<std::pair<double, double>> v;
    for (const auto &p : c.points) {
        if (p.result.converged && p.result.gates > 0) v.push_back({p.duration, double(p.result.gates)});
    }
    return v;
}

inline double curve_at(const std::vector<std::pair<double, double>> &v, double t) {
    require(!v.empty(), ErrorCode::invalid_argument, "interpolating an empty curve");
    if (t <= v.front().first) return v.front().second;
    if (t >= v.back().first) return v.back().second;
    for (size_t i = 0; i + 1 < v.size(); i++) {
        if (t <= v[i + 1].first) return loglog_interp(v[i].first, v[i].second, v[i + 1].first, v[i + 1].second, t);
    }
    return v.back().second;
}
}  // namespace detail

/// First time the QDrift and Trotter log-log interpolants meet, and the
/// composite advantage xi = C_QD(t') / C_X(t') there.
inline CrossoverReport crossover(const CostCurve &qd, const CostCurve &ts, const CostCurve &x) {
    auto a = detail::valid_points(qd), b = detail::valid_points(ts), c = detail::valid_points(x);
    CrossoverReport rep;
    if (a.empty() || b.empty() || c.empty()) return rep;
    // Common support: durations present (converged) in both pure curves.
    std::vector<double> ts_grid;
    for (auto &p : a) {
        for (auto &q : b) {
            if (p.first == q.first) ts_grid.push_back(p.first);
        }
    }
    auto diff = [&](double t) { return std::log(detail::curve_at(a, t)) - std::log(detail::curve_at(b, t)); };
    for (size_t i = 0; i < ts_grid.size(); i++) {
        double di = diff(ts_grid[i]);
        double t_hit = -1;
        if (di == 0) {
            t_hit = ts_grid[i];
        } else if (i + 1 < ts_grid.size()) {
            double dj = diff(ts_grid[i + 1]);
            if ((di < 0) != (dj < 0) || dj == 0) {
                double f = di / (di - dj);
                t_hit = std::exp(std::log(ts_grid[i]) + f * (std::log(ts_grid[i + 1]) - std::log(ts_grid[i])));
            }
        }
        if (t_hit > 0) {
            rep.found = true;
            rep.t_cross = t_hit;
            rep.c_qd = detail::curve_at(a, t_hit);
            rep.c_x = detail::curve_at(c, t_hit);
            rep.xi = rep.c_qd / rep.c_x;
            return rep;
        }
    }
    return rep;
}

}  // namespace composim
