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

// composim command-line front end. Exit codes: 0 success, 1 unconverged or
// failed check, 2 usage error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "composim/composim.hpp"
#include "composim/manifest.hpp"

using namespace composim;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Globals {
    uint64_t seed = 0;
    int threads = 1;
    std::string out;
    double epsilon = 1e-3;
    std::string time_kind = "real";
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

TimeKind parse_time_kind(const std::string &s) { return s == "imaginary" ? TimeKind::imaginary : TimeKind::real; }

struct HamiltonianArgs {
    std::string path;
    bool normalize = false;

    void add(CLI::App *sub, bool required) {
        auto *o = sub->add_option("--hamiltonian", path, "Hamiltonian JSON file")->check(CLI::ExistingFile);
        if (required) o->required();
        sub->add_flag("--normalize", normalize, "rescale to spectral norm 1");
    }

    HamiltonianSum load(RunManifest &m) const {
        HamiltonianSum h = load_hamiltonian(path);
        m.add_input(path);
        m.params["hamiltonian"] = path;
        m.params["normalize"] = normalize;
        return normalize ? composim::normalize(h) : h;
    }
};

struct PartitionArgs {
    std::optional<double> omega;
    std::optional<int> nb;

    void add(CLI::App *sub) {
        sub->add_option("--omega", omega, "chop threshold omega_c (default: heuristic)");
        sub->add_option("--nb", nb, "QDrift samples per iteration (default: round(L / 5))")->check(CLI::PositiveNumber);
    }

    /// Resolves defaults and records where each value came from.
    std::pair<Partition, int> resolve(const HamiltonianSum &h, RunManifest &m) const {
        Partition p;
        if (omega) {
            p = chop(h, *omega);
            m.params["omega_source"] = "flag";
        } else if (h.size() >= 2) {
            p = heuristic_partition(h);
            m.params["omega_source"] = "heuristic";
        } else {
            p = Partition::all_trotter(h);
            m.params["omega_source"] = "single-term";
        }
        int n = nb ? *nb : default_nb(h);
        m.params["omega_c"] = p.omega_c;
        m.params["Nb"] = n;
        m.params["nb_source"] = nb ? "flag" : "default";
        m.params["L_A"] = p.a_ids.size();
        return {p, n};
    }
};

std::string basename(const std::string &p) { return std::filesystem::path(p).filename().string(); }

/// Writes the data file (or stdout) and, with --out, its manifest.
class Output {
   public:
    Output(const Globals &g, RunManifest &m) : g_(g), m_(m), start_(std::chrono::steady_clock::now()) {}

    bool to_file() const { return !g_.out.empty(); }

    void write(const std::string &data) {
        if (!to_file()) {
            std::cout << data;
            return;
        }
        std::ofstream f(g_.out, std::ios::binary);
        require(f.good(), ErrorCode::io_error, "cannot write " + g_.out);
        f << data;
        m_.outputs.push_back(g_.out);
    }

    void write_json(json j) {
        if (to_file()) j["manifest"] = basename(manifest_path(g_.out));
        write(j.dump(2) + "\n");
    }

    void finish() {
        if (!to_file()) return;
        m_.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        const std::string mp = manifest_path(g_.out);
        json mj = m_.to_json();
        std::ifstream prev(mp);
        if (prev.good()) {
            json old;
            try {
                prev >> old;
            } catch (const json::exception &) {
                old = json::object();
            }
            bool same_inputs = old.value("inputs", json()) == mj["inputs"];
            mj["previous_run"] = {{"same_manifest", m_.same_run(old)}, {"inputs_changed", !same_inputs}};
            if (!same_inputs) std::cerr << "note: input files changed since the previous run recorded in " << mp << "\n";
        }
        std::ofstream f(mp);
        require(f.good(), ErrorCode::io_error, "cannot write " + mp);
        f << mj.dump(2) << "\n";
    }

   private:
    const Globals &g_;
    RunManifest &m_;
    std::chrono::steady_clock::time_point start_;
};

void record_globals(const Globals &g, RunManifest &m, int threads) {
    m.params["seed"] = g.seed;
    m.params["threads"] = threads;
    m.params["epsilon"] = g.epsilon;
    m.params["time_kind"] = g.time_kind;
    m.params["rng"] = kRngName;
}

// Channel tokens: T<k> Trotter of order k, QD QDrift, X<k> composite with inner order k.
struct ChannelToken {
    ChannelKind kind;
    int order = 1;
};

ChannelToken parse_channel(const std::string &tok) {
    if (tok == "QD") return {ChannelKind::qdrift, 1};
    if (tok.size() >= 2 && (tok[0] == 'T' || tok[0] == 'X')) {
        int k = 0;
        try {
            size_t used = 0;
            k = std::stoi(tok.substr(1), &used);
            if (used != tok.size() - 1) k = 0;
        } catch (const std::logic_error &) {
            k = 0;
        }
        if (k == 1 || (k >= 2 && k % 2 == 0)) return {tok[0] == 'T' ? ChannelKind::trotter : ChannelKind::composite, k};
    }
    throw UsageError("unknown channel '" + tok + "' (expected T<k>, QD or X<k>)");
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string curves_csv(const std::vector<CostCurve> &curves) {
    std::ostringstream os;
    os << kCsvHeader << "\n";
    for (const auto &c : curves) write_csv_rows(os, c);
    return os.str();
}

/// 0 when every point converged, a warning when some did not, 1 when none did.
int convergence_status(const std::vector<CostCurve> &curves) {
    size_t total = 0, bad = 0;
    for (const auto &c : curves) {
        for (const auto &p : c.points) {
            total++;
            if (!p.result.converged) bad++;
        }
    }
    if (bad == 0) return kExitOk;
    if (bad == total) {
        std::cerr << "error: no point converged\n";
        return kExitFailed;
    }
    std::cerr << "warning: " << bad << " of " << total << " points did not converge (gates = -1)\n";
    return kExitOk;
}

MeasureKind parse_measure(const std::string &s) {
    if (s == "infidelity") return MeasureKind::infidelity_exact;
    if (s == "infidelity-mc") return MeasureKind::infidelity_mc;
    return MeasureKind::trace_distance;
}

// Subcommands -------------------------------------------------------------------

struct GenArgs {
    std::string model;
    int sites = 0;
    std::optional<double> scale;
    double bz = 1, jx = 1, jy = 1, jz = 1;
    bool normalize = false;
};

int cmd_gen_hamiltonian(const Globals &g, const GenArgs &a) {
    RunManifest m;
    m.command = "gen-hamiltonian";
    record_globals(g, m, 1);
    m.params["model"] = a.model;
    m.params["sites"] = a.sites;
    m.params["normalize"] = a.normalize;
    HamiltonianSum h;
    if (a.model == "graph") {
        h = graph_model(a.sites, g.seed);
    } else {
        CouplingConfig cfg;
        cfg.jx = a.jx;
        cfg.jy = a.jy;
        cfg.jz = a.jz;
        cfg.bz = a.bz;
        cfg.rng_seed = g.seed;
        if (a.model == "spin-glass" || a.scale) {
            cfg.disorder = Disorder::exponential;
            cfg.scale = a.scale.value_or(0.1);
            m.params["scale"] = cfg.scale;
        }
        m.params["couplings"] = {{"jx", cfg.jx}, {"jy", cfg.jy}, {"jz", cfg.jz}, {"bz", cfg.bz}};
        h = heisenberg(a.sites, cfg);
    }
    if (a.normalize) h = normalize(h);
    Output out(g, m);
    out.write_json(hamiltonian_to_json(h));
    out.finish();
    return kExitOk;
}

struct SweepArgs {
    HamiltonianArgs ham;
    PartitionArgs part;
    std::string channels = "T1,T2,QD,X1";
    int points = 20;
    std::optional<double> t_min, t_max;
    std::string measure = "trace";
    int mc_samples = 1000;
    int outer_order = 1;
    int r_max = kDefaultRMax;
};

std::vector<double> sweep_grid(std::optional<double> t_min, std::optional<double> t_max, int points) {
    double hi = t_max.value_or(3 * M_PI / 2);
    double lo = t_min.value_or(hi / 100);
    return log_grid(lo, hi, points);
}

int cmd_cost_sweep(const Globals &g, const SweepArgs &a) {
    RunManifest m;
    m.command = "cost-sweep";
    const int threads = resolve_threads(g.threads);
    record_globals(g, m, threads);
    HamiltonianSum h = a.ham.load(m);
    auto [part, nb] = a.part.resolve(h, m);
    auto grid = sweep_grid(a.t_min, a.t_max, a.points);
    m.params["grid"] = grid;
    m.params["channels"] = a.channels;
    m.params["measure"] = a.measure;
    m.params["outer_order"] = a.outer_order;
    m.params["r_max"] = a.r_max;
    if (a.measure == "infidelity-mc") m.params["mc_samples"] = a.mc_samples;

    std::vector<CostCurve> curves;
    for (const auto &tok : split(a.channels, ',')) {
        ChannelToken c = parse_channel(tok);
        CostQuery q;
        q.h = h;
        q.spec.kind = c.kind;
        q.spec.time_kind = parse_time_kind(g.time_kind);
        q.spec.inner_order = c.order;
        q.spec.outer_order = c.kind == ChannelKind::composite ? a.outer_order : 1;
        q.spec.nb = c.kind == ChannelKind::composite ? nb : 1;
        q.partition = c.kind == ChannelKind::trotter ? Partition::all_trotter(h) : c.kind == ChannelKind::qdrift ? Partition::all_qdrift(h) : part;
        q.epsilon = g.epsilon;
        q.measure.kind = parse_measure(a.measure);
        q.measure.samples = a.mc_samples;
        q.measure.seed = g.seed;
        q.state_seed = g.seed;
        q.r_max = a.r_max;
        curves.push_back(cost_sweep(q, grid, threads));
    }
    Output out(g, m);
    out.write(curves_csv(curves));
    out.finish();
    return convergence_status(curves);
}

struct CrossArgs {
    std::string csv;
    HamiltonianArgs ham;
    PartitionArgs part;
    int trotter_order = 1;
    int composite_order = 1;
    int points = 20;
    std::optional<double> t_min, t_max;
};

const CostCurve *pick(const std::vector<CostCurve> &cs, const std::string &channel, int order) {
    for (const auto &c : cs) {
        if (c.channel == channel && (order < 0 || c.inner_order == order)) return &c;
    }
    return nullptr;
}

int cmd_crossover(const Globals &g, const CrossArgs &a) {
    RunManifest m;
    m.command = "crossover";
    const int threads = resolve_threads(g.threads);
    record_globals(g, m, threads);
    m.params["trotter_order"] = a.trotter_order;
    m.params["composite_order"] = a.composite_order;
    std::vector<CostCurve> curves;
    if (!a.csv.empty()) {
        m.add_input(a.csv);
        m.params["csv"] = a.csv;
        curves = read_csv(a.csv);
    } else {
        if (a.ham.path.empty()) throw UsageError("crossover needs --csv or --hamiltonian");
        HamiltonianSum h = a.ham.load(m);
        auto [part, nb] = a.part.resolve(h, m);
        auto grid = sweep_grid(a.t_min, a.t_max, a.points);
        m.params["grid"] = grid;
        auto run = [&](ChannelKind k, int order, const Partition &p, int n) {
            CostQuery q;
            q.h = h;
            q.spec.kind = k;
            q.spec.time_kind = parse_time_kind(g.time_kind);
            q.spec.inner_order = order;
            q.spec.nb = n;
            q.partition = p;
            q.epsilon = g.epsilon;
            q.state_seed = g.seed;
            return cost_sweep(q, grid, threads);
        };
        curves.push_back(run(ChannelKind::qdrift, 1, Partition::all_qdrift(h), 1));
        curves.push_back(run(ChannelKind::trotter, a.trotter_order, Partition::all_trotter(h), 1));
        curves.push_back(run(ChannelKind::composite, a.composite_order, part, nb));
    }
    const CostCurve *qd = pick(curves, "qdrift", -1), *ts = pick(curves, "trotter", a.trotter_order),
                    *x = pick(curves, "composite", a.composite_order);
    if (!qd || !ts || !x) throw UsageError("crossover needs qdrift, trotter and composite curves of the requested orders");
    CrossoverReport rep = crossover(*qd, *ts, *x);
    json j = {{"found", rep.found}, {"t_cross", rep.t_cross}, {"xi", rep.xi},        {"c_qdrift", rep.c_qd},
              {"c_composite", rep.c_x}, {"method", rep.method}, {"trotter_order", a.trotter_order},
              {"composite_order", a.composite_order}};
    Output out(g, m);
    out.write_json(j);
    out.finish();
    if (!rep.found) std::cerr << "error: the QDrift and Trotter curves do not cross on this grid\n";
    return rep.found ? kExitOk : kExitFailed;
}

struct OptArgs {
    HamiltonianArgs ham;
    double time = 0;
    int budget = 50;
    std::string strategy = "random";
    int nb_min = 1, nb_max = 64;
    std::optional<double> omega_lo, omega_hi;
    int inner_order = 1;
    int r_max = kDefaultRMax;
};

int cmd_optimize(const Globals &g, const OptArgs &a) {
    RunManifest m;
    m.command = "optimize";
    const int threads = resolve_threads(g.threads);
    record_globals(g, m, threads);
    HamiltonianSum h = a.ham.load(m);
    CostQuery q;
    q.h = h;
    q.spec.kind = ChannelKind::composite;
    q.spec.time_kind = parse_time_kind(g.time_kind);
    q.spec.inner_order = a.inner_order;
    q.epsilon = g.epsilon;
    q.duration = a.time;
    q.state_seed = g.seed;
    q.r_max = a.r_max;
    q.validate();
    OptimizerBudget b;
    b.max_evaluations = a.budget;
    b.nb_min = a.nb_min;
    b.nb_max = a.nb_max;
    if (a.omega_lo) b.omega_lo = *a.omega_lo;
    if (a.omega_hi) b.omega_hi = *a.omega_hi;
    b.seed = g.seed;
    b.strategy = a.strategy == "grid" ? OptStrategy::grid_descent : OptStrategy::random_search;
    b.threads = threads;
    m.params["time"] = a.time;
    m.params["budget"] = a.budget;
    m.params["strategy"] = a.strategy;
    m.params["nb_range"] = {a.nb_min, a.nb_max};
    m.params["inner_order"] = a.inner_order;
    m.params["r_max"] = a.r_max;
    OptimizeResult r = optimize_partition(q, b);
    json hist = json::array();
    for (const auto &e : r.history) hist.push_back(e.to_json());
    json j = {{"omega_c", r.partition.omega_c},
              {"Nb", r.nb},
              {"a_ids", r.partition.a_ids},
              {"b_ids", r.partition.b_ids},
              {"provenance", provenance_name(r.partition.provenance)},
              {"r", r.r},
              {"cost", r.cost},
              {"epsilon", r.epsilon},
              {"baseline_kept", r.baseline_kept},
              {"history", hist}};
    Output out(g, m);
    out.write_json(j);
    out.finish();
    return kExitOk;
}

struct ScalingArgs {
    HamiltonianArgs ham;
    int sites = 5;
    double t_min = 1e-3, t_max = 1e-1;
    int points = 9;
};

int cmd_scaling_check(const Globals &g, const ScalingArgs &a) {
    RunManifest m;
    m.command = "scaling-check";
    record_globals(g, m, 1);
    HamiltonianSum h;
    if (a.ham.path.empty()) {
        h = graph_model(a.sites, g.seed);
        m.params["model"] = "graph";
        m.params["sites"] = a.sites;
    } else {
        h = a.ham.load(m);
    }
    m.params["t_range"] = {a.t_min, a.t_max};
    m.params["points"] = a.points;
    ScalingReport rep = scaling_check(h, a.t_min, a.t_max, a.points, g.seed);
    json series = json::array();
    for (const auto &s : rep.series) series.push_back(s.to_json());
    Output out(g, m);
    out.write_json({{"pass", rep.pass}, {"series", series}});
    out.finish();
    for (const auto &s : rep.series) {
        if (s.dropped) std::cerr << "note: " << s.name << " dropped " << s.dropped << " points below the precision floor\n";
    }
    return rep.pass ? kExitOk : kExitFailed;
}

struct LocalArgs {
    HamiltonianArgs ham;
    int sites = 8;
    double scale = 5e-5;
    std::string blocks;
    int overlap = 1;
    int n_blocks = 2;
    std::string nb = "4,1,4";
    std::string channels = "local-trotter,local-composite,trotter";
    int points = 6;
    double t_min = 0.01, t_max = 1.0;
    int inner_order = 1;
    int r_max = 1 << 20;
    bool probe = false;
};

int cmd_local_sweep(const Globals &g, const LocalArgs &a) {
    if (parse_time_kind(g.time_kind) != TimeKind::real) throw UsageError("local-sweep is real-time only");
    RunManifest m;
    m.command = "local-sweep";
    const int threads = resolve_threads(g.threads);
    record_globals(g, m, threads);
    HamiltonianSum h;
    if (a.ham.path.empty()) {
        h = spin_glass(a.sites, a.scale, 1.0, g.seed);
        m.params["model"] = "spin-glass";
        m.params["sites"] = a.sites;
        m.params["scale"] = a.scale;
    } else {
        h = a.ham.load(m);
    }
    LatticeSpec lat = LatticeSpec::chain(h.n_qubits);
    Blocking blocking = a.blocks.empty() ? Blocking::chain(h.n_qubits, a.n_blocks, a.overlap) : Blocking::parse(a.blocks, h.n_qubits);
    std::vector<int> nbs;
    for (const auto &s : split(a.nb, ',')) {
        try {
            nbs.push_back(std::stoi(s));
        } catch (const std::logic_error &) {
            throw UsageError("bad --nb entry '" + s + "'");
        }
    }
    if (nbs.size() != blocking.blocks.size()) {
        throw UsageError("--nb has " + std::to_string(nbs.size()) + " entries but the blocking has " + std::to_string(blocking.blocks.size()) +
                         " blocks");
    }
    auto grid = log_grid(a.t_min, a.t_max, a.points);
    m.params["blocks"] = blocking.describe();
    m.params["overlap"] = blocking.overlap;
    m.params["block_geometry"] = "near-equal forward blocks, neighbours share l sites";
    m.params["Nb"] = nbs;
    m.params["grid"] = grid;
    m.params["inner_order"] = a.inner_order;
    m.params["channels"] = a.channels;
    m.params["r_max"] = a.r_max;

    const std::string tag = "_l" + std::to_string(blocking.overlap);
    std::vector<CostCurve> curves;
    for (const auto &ch : split(a.channels, ',')) {
        if (ch == "local-trotter") {
            LocalChannel lc(h, lat, blocking, all_trotter_specs(h, lat, blocking, a.inner_order));
            curves.push_back(local_sweep(h, lc, "local_trotter" + tag, grid, g.epsilon, g.seed, a.r_max, threads));
            curves.back().inner_order = a.inner_order;
        } else if (ch == "local-composite") {
            auto specs = heuristic_specs(h, lat, blocking, nbs, a.inner_order);
            LocalChannel lc(h, lat, blocking, specs);
            curves.push_back(local_sweep(h, lc, "local_composite" + tag, grid, g.epsilon, g.seed, a.r_max, threads));
            curves.back().inner_order = a.inner_order;
        } else if (ch == "trotter") {
            CostQuery q;
            q.h = h;
            q.spec.kind = ChannelKind::trotter;
            q.spec.inner_order = a.inner_order;
            q.partition = Partition::all_trotter(h);
            q.epsilon = g.epsilon;
            q.state_seed = g.seed;
            q.r_max = a.r_max;
            curves.push_back(cost_sweep(q, grid, threads));
        } else {
            throw UsageError("unknown local channel '" + ch + "' (expected local-trotter, local-composite or trotter)");
        }
    }
    if (a.probe) {
        for (double t : grid) std::cerr << "lr_error t=" << t << " " << lr_error_probe(h, lat, blocking, t, 8, g.seed) << "\n";
    }
    Output out(g, m);
    out.write(curves_csv(curves));
    out.finish();
    return convergence_status(curves);
}

struct ExportArgs {
    HamiltonianArgs ham;
    PartitionArgs part;
    double beta = 1;
    std::optional<int> r;
    int order = 1;
    bool estimate_z = false;
    int z_samples = 64;
};

int cmd_export(const Globals &g, const ExportArgs &a, bool time_kind_given) {
    if (time_kind_given && parse_time_kind(g.time_kind) != TimeKind::imaginary) throw UsageError("export-propagators is imaginary-time only");
    RunManifest m;
    m.command = "export-propagators";
    record_globals(g, m, 1);
    m.params["time_kind"] = "imaginary";
    HamiltonianSum h = a.ham.load(m);
    auto [part, nb] = a.part.resolve(h, m);
    m.params["beta"] = a.beta;
    m.params["order"] = a.order;
    int r = 0;
    if (a.r) {
        r = *a.r;
        m.params["r_source"] = "flag";
    } else {
        CostQuery q;
        q.h = h;
        q.spec.kind = ChannelKind::composite;
        q.spec.time_kind = TimeKind::imaginary;
        q.spec.inner_order = a.order;
        q.spec.nb = nb;
        q.partition = part;
        q.epsilon = g.epsilon;
        q.duration = a.beta;
        q.state_seed = g.seed;
        SearchResult sr = find_min_r(q);
        require(sr.converged, ErrorCode::unconverged, "no r up to r_max reaches epsilon");
        r = sr.r;
        m.params["r_source"] = "find_min_r";
    }
    m.params["r"] = r;
    PropagatorList list = export_propagator_list(h, part, a.beta, r, a.order, nb, g.seed);
    json j = list.to_json();
    if (a.estimate_z) {
        PartitionEstimate z = estimate_partition_function(h, part, a.beta, r, a.order, nb, a.z_samples, g.seed);
        m.params["z_samples"] = a.z_samples;
        j["partition_function"] = {{"z_est", z.z_est},
                                   {"stderr", z.stderr_},
                                   {"z_exact", z.z_exact},
                                   {"relative_error", std::abs(z.z_est - z.z_exact) / z.z_exact},
                                   {"samples", z.samples},
                                   {"theorem3_bound", theorem3(h, part, a.beta, r, a.order, nb).value}};
    }
    Output out(g, m);
    out.write_json(j);
    out.finish();
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"composim: composite Trotter/QDrift channel simulator"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "master seed (state, sampling, generation)");
    app.add_option("--threads", g.threads, "worker threads, 0 = all cores; COMPOSIM_THREADS overrides");
    app.add_option("--out", g.out, "output file (default stdout); a manifest is written next to it");
    app.add_option("--epsilon", g.epsilon, "target error")->check(CLI::PositiveNumber);
    auto *tk = app.add_option("--time-kind", g.time_kind, "real or imaginary")->check(CLI::IsMember({"real", "imaginary"}));

    GenArgs gen;
    auto *s_gen = app.add_subcommand("gen-hamiltonian", "write a model Hamiltonian as JSON");
    s_gen->add_option("--model", gen.model, "heisenberg, spin-glass or graph")->required()->check(CLI::IsMember({"heisenberg", "spin-glass", "graph"}));
    s_gen->add_option("--sites", gen.sites, "number of sites")->required()->check(CLI::Range(2, 63));
    s_gen->add_option("--scale", gen.scale, "exponential coupling scale (enables disorder)")->check(CLI::PositiveNumber);
    s_gen->add_option("--bz", gen.bz, "field strength");
    s_gen->add_option("--jx", gen.jx);
    s_gen->add_option("--jy", gen.jy);
    s_gen->add_option("--jz", gen.jz);
    s_gen->add_flag("--normalize", gen.normalize, "rescale to spectral norm 1");

    SweepArgs sweep;
    auto *s_sweep = app.add_subcommand("cost-sweep", "minimal gate cost per channel over a duration grid (CSV)");
    sweep.ham.add(s_sweep, true);
    sweep.part.add(s_sweep);
    s_sweep->add_option("--channels", sweep.channels, "comma list of T<k>, QD, X<k>");
    s_sweep->add_option("--points", sweep.points, "grid points")->check(CLI::PositiveNumber);
    s_sweep->add_option("--t-min", sweep.t_min)->check(CLI::PositiveNumber);
    s_sweep->add_option("--t-max", sweep.t_max)->check(CLI::PositiveNumber);
    s_sweep->add_option("--measure", sweep.measure)->check(CLI::IsMember({"trace", "infidelity", "infidelity-mc"}));
    s_sweep->add_option("--mc-samples", sweep.mc_samples)->check(CLI::PositiveNumber);
    s_sweep->add_option("--outer-order", sweep.outer_order, "composite outer order")->check(CLI::IsMember({1, 2}));
    s_sweep->add_option("--r-max", sweep.r_max)->check(CLI::PositiveNumber);

    CrossArgs cross;
    auto *s_cross = app.add_subcommand("crossover", "QDrift/Trotter crossover and composite advantage (JSON)");
    s_cross->add_option("--csv", cross.csv, "cost-sweep CSV to analyse")->check(CLI::ExistingFile);
    cross.ham.add(s_cross, false);
    cross.part.add(s_cross);
    s_cross->add_option("--trotter-order", cross.trotter_order);
    s_cross->add_option("--composite-order", cross.composite_order);
    s_cross->add_option("--points", cross.points)->check(CLI::PositiveNumber);
    s_cross->add_option("--t-min", cross.t_min)->check(CLI::PositiveNumber);
    s_cross->add_option("--t-max", cross.t_max)->check(CLI::PositiveNumber);

    OptArgs opt;
    auto *s_opt = app.add_subcommand("optimize", "search (omega_c, N_B) for the cheapest composite channel (JSON)");
    opt.ham.add(s_opt, true);
    s_opt->add_option("--time", opt.time, "duration t or beta")->required()->check(CLI::PositiveNumber);
    s_opt->add_option("--budget", opt.budget, "maximum evaluations")->check(CLI::PositiveNumber);
    s_opt->add_option("--strategy", opt.strategy)->check(CLI::IsMember({"random", "grid"}));
    s_opt->add_option("--nb-min", opt.nb_min)->check(CLI::PositiveNumber);
    s_opt->add_option("--nb-max", opt.nb_max)->check(CLI::PositiveNumber);
    s_opt->add_option("--omega-lo", opt.omega_lo);
    s_opt->add_option("--omega-hi", opt.omega_hi);
    s_opt->add_option("--inner-order", opt.inner_order);
    s_opt->add_option("--r-max", opt.r_max)->check(CLI::PositiveNumber);

    ScalingArgs sc;
    auto *s_sc = app.add_subcommand("scaling-check", "fitted error-vs-time slopes against the analytic orders (JSON)");
    sc.ham.add(s_sc, false);
    s_sc->add_option("--sites", sc.sites, "graph model size when no Hamiltonian is given")->check(CLI::Range(2, 10));
    s_sc->add_option("--t-min", sc.t_min)->check(CLI::PositiveNumber);
    s_sc->add_option("--t-max", sc.t_max)->check(CLI::PositiveNumber);
    s_sc->add_option("--points", sc.points)->check(CLI::Range(3, 200));

    LocalArgs loc;
    auto *s_loc = app.add_subcommand("local-sweep", "block-local channel costs on a 1D chain (CSV)");
    loc.ham.add(s_loc, false);
    s_loc->add_option("--sites", loc.sites, "spin-glass chain size when no Hamiltonian is given")->check(CLI::Range(2, 10));
    s_loc->add_option("--scale", loc.scale, "coupling scale of the generated chain")->check(CLI::PositiveNumber);
    s_loc->add_option("--blocks", loc.blocks, "explicit blocks, e.g. 1-3,3,3-5 (1-based)");
    s_loc->add_option("--overlap", loc.overlap, "overlap width l for generated blocks")->check(CLI::NonNegativeNumber);
    s_loc->add_option("--m", loc.n_blocks, "forward block count for generated blocks")->check(CLI::PositiveNumber);
    s_loc->add_option("--nb", loc.nb, "per-block N_B, comma separated");
    s_loc->add_option("--channels", loc.channels, "comma list of local-trotter, local-composite, trotter");
    s_loc->add_option("--points", loc.points)->check(CLI::PositiveNumber);
    s_loc->add_option("--t-min", loc.t_min)->check(CLI::PositiveNumber);
    s_loc->add_option("--t-max", loc.t_max)->check(CLI::PositiveNumber);
    s_loc->add_option("--inner-order", loc.inner_order);
    s_loc->add_option("--r-max", loc.r_max)->check(CLI::PositiveNumber);
    s_loc->add_flag("--probe", loc.probe, "print the bare blocking error at each grid time to stderr");

    ExportArgs ex;
    auto *s_ex = app.add_subcommand("export-propagators", "imaginary-time propagator list for one sampled trajectory (JSON)");
    ex.ham.add(s_ex, true);
    ex.part.add(s_ex);
    s_ex->add_option("--beta", ex.beta)->check(CLI::PositiveNumber);
    s_ex->add_option("--r", ex.r, "iterations (default: find_min_r at --epsilon)")->check(CLI::PositiveNumber);
    s_ex->add_option("--order", ex.order, "inner Trotter order");
    s_ex->add_flag("--estimate-z", ex.estimate_z, "estimate Tr exp(-beta H) from sampled trajectories");
    s_ex->add_option("--z-samples", ex.z_samples)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*s_gen) return cmd_gen_hamiltonian(g, gen);
        if (*s_sweep) return cmd_cost_sweep(g, sweep);
        if (*s_cross) return cmd_crossover(g, cross);
        if (*s_opt) return cmd_optimize(g, opt);
        if (*s_sc) return cmd_scaling_check(g, sc);
        if (*s_loc) return cmd_local_sweep(g, loc);
        if (*s_ex) return cmd_export(g, ex, tk->count() > 0);
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error &e) {
        std::cerr << "error (" << error_code_name(e.code()) << "): " << e.what() << "\n";
        return e.code() == ErrorCode::unconverged ? kExitFailed : kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailed;
    }
    return kExitUsage;
}
