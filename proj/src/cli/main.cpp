// Command-line front end: model validation, assumption reports, bound
// construction, volume/loss metrics, discount sweeps, and reproduction of the
// published benchmark tables.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "myopic/assumptions.h"
#include "myopic/bounds.h"
#include "myopic/evaluation.h"
#include "myopic/model.h"
#include "myopic/solver.h"

using nlohmann::json;
using namespace myopic;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v, int prec = 6) {
    if (std::isnan(v)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

// Atomic artifact write: temp file in place, then rename.
void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename " + tmp + " -> " + path + " failed");
}

std::vector<double> parse_point(const std::string& text, int expect) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            v.push_back(std::stod(part));
        } catch (const std::exception&) {
            throw UsageError("bad number '" + part + "' in '" + text + "'");
        }
    }
    if (expect > 0 && static_cast<int>(v.size()) != expect)
        throw UsageError("expected " + std::to_string(expect) + " comma-separated values, got " +
                         std::to_string(v.size()));
    double s = 0.0;
    for (double x : v) {
        if (x < -1e-12) throw UsageError("belief entries must be nonnegative: " + text);
        s += x;
    }
    if (std::fabs(s - 1.0) > 1e-9) throw UsageError("belief must sum to 1: " + text);
    return v;
}

// Shared model/flag state across subcommands.
struct Options {
    std::string example, model_file;
    std::vector<double> theta;
    std::vector<double> rhos;
    std::uint64_t seed = 1;
    int runs = 1000;
    int horizon = 100;
    long vol_samples = -1;  // -1: 10^6 when X <= 3 else 10^5
    int grid_d = -1;        // -1: 100 when X <= 3 else 12
    int threads = 1;
    std::string out, format = "csv";
    bool strict = false;
    std::vector<std::string> beliefs;  // bounds
    std::string pi0;                   // loss/sweep
    std::string table;                 // reproduce
};

void add_model_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--example", o.example, "builtin model id: 1, 2d, 2g, 3, 4");
    cmd->add_option("--model", o.model_file, "model JSON file");
    cmd->add_option("--theta", o.theta, "example-4 transition parameters theta1 theta2")
        ->expected(2);
}

void add_output_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--out", o.out, "artifact output path (written atomically)");
    cmd->add_option("--format", o.format, "artifact format")
        ->check(CLI::IsMember({"csv", "json"}));
}

PomdpModel resolve_model(const Options& o) {
    const bool have_example = !o.example.empty(), have_file = !o.model_file.empty();
    if (have_example == have_file)
        throw UsageError("give exactly one of --example or --model");
    if (!o.theta.empty() && o.example != "4")
        throw UsageError("--theta only applies to --example 4");
    if (have_file) return load_model_file(o.model_file);
    double t1 = 0.25, t2 = 0.35;  // default interior cell of the admissible grid
    if (!o.theta.empty()) {
        t1 = o.theta[0];
        t2 = o.theta[1];
        if (!(t1 >= 0.0 && t1 <= t2 && t2 <= 0.5))
            throw UsageError("--theta needs 0 <= theta1 <= theta2 <= 0.5");
    }
    return builtin_example(o.example, t1, t2);
}

std::vector<double> rhos_or(const Options& o, std::vector<double> dflt) {
    if (o.rhos.empty()) return dflt;
    for (double r : o.rhos)
        if (!(r >= 0.0 && r < 1.0)) throw UsageError("--rho must lie in [0, 1)");
    return o.rhos;
}

long auto_vol_samples(const Options& o, const PomdpModel& m) {
    if (o.vol_samples > 0) return o.vol_samples;
    return m.num_states <= 3 ? 1000000L : 100000L;
}

int auto_grid(const Options& o, const PomdpModel& m) {
    if (o.grid_d > 0) return o.grid_d;
    return m.num_states <= 3 ? 100 : 12;
}

// Priors the published loss columns use: a belief the bounds pin.
std::optional<std::vector<double>> default_pi0(const std::string& example, int X) {
    int corner = -1;
    if (example == "1") corner = 2;                          // e3
    else if (example == "2d" || example == "2-discrete") corner = 4;   // e5
    else if (example == "2g" || example == "2-gaussian") corner = 4;
    else if (example == "3") corner = 0;                     // e1
    else if (example == "4") corner = 0;                     // e1 (pinned for every theta)
    if (corner < 0) return std::nullopt;
    std::vector<double> pi(X, 0.0);
    pi[corner] = 1.0;
    return pi;
}

void emit(const Options& o, const std::string& csv, const json& j) {
    if (o.out.empty()) return;
    write_atomic(o.out, o.format == "json" ? j.dump(2) + "\n" : csv);
    std::printf("wrote %s\n", o.out.c_str());
}

// ---------------------------------------------------------------- validate
int run_validate(const Options& o) {
    PomdpModel m;
    try {
        m = resolve_model(o);
    } catch (const ModelParseError& e) {
        std::fprintf(stderr, "invalid model: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid model: %s\n", e.what());
        return 1;
    }
    ValidationReport rep = validate_model(m);
    json j;
    j["ok"] = rep.ok();
    j["issues"] = json::array();
    for (const auto& is : rep.issues) j["issues"].push_back({{"field", is.field}, {"message", is.message}});
    std::string csv = "field,message\n";
    for (const auto& is : rep.issues) csv += is.field + "," + is.message + "\n";
    emit(o, csv, j);
    if (!rep.ok()) {
        for (const auto& is : rep.issues)
            std::fprintf(stderr, "invalid model: %s: %s\n", is.field.c_str(), is.message.c_str());
        return 1;
    }
    std::printf("model ok: X=%d A=%d Y=%d discount=%s\n", m.num_states, m.num_actions, m.num_obs(),
                fmt(m.discount, 4).c_str());
    return 0;
}

// ------------------------------------------------------------------- check
json report_json_with_rho(double rho, const AssumptionReport& rep) {
    json j = json::parse(report_to_json(rep));
    j["rho"] = rho;
    return j;
}

int run_check(const Options& o) {
    PomdpModel m = resolve_model(o);
    std::vector<double> rhos = rhos_or(o, {m.discount});
    json arr = json::array();
    bool all_ok = true;
    for (double rho : rhos) {
        m.discount = rho;
        AssumptionReport rep = check_all(m);
        all_ok = all_ok && rep.overall;
        arr.push_back(report_json_with_rho(rho, rep));
        auto yn = [](bool b) { return b ? "yes" : "no"; };
        std::printf("rho=%s: a1=%s a2=%s a3=%s a4=%s a5=%s overall=%s%s\n", fmt(rho, 2).c_str(),
                    yn(rep.a1.has_value()), yn(rep.a2.has_value()), yn(rep.a3.holds),
                    yn(rep.a4.holds), yn(rep.a5.holds), yn(rep.overall),
                    rep.grid_approx ? " (gaussian kernel checked on its quantization)" : "");
    }
    json j = arr.size() == 1 ? arr[0] : arr;
    // check emits the assumption-report schema regardless of --format
    if (!o.out.empty()) {
        write_atomic(o.out, j.dump(2) + "\n");
        std::printf("wrote %s\n", o.out.c_str());
    }
    if (o.strict && !all_ok) {
        std::fprintf(stderr, "assumption check failed\n");
        return 1;
    }
    return 0;
}

// ------------------------------------------------------------------ bounds
json bounds_json(const PomdpModel& m, const BoundsEvaluator& ev, const Options& o) {
    json j;
    j["rho"] = m.discount;
    j["f_up"] = ev.up.f;
    j["f_lo"] = ev.lo.f;
    j["monotone_margin_up"] = ev.up.monotone_margin;
    j["monotone_margin_lo"] = ev.lo.monotone_margin;
    j["optimized_two_action"] = ev.optimized_two_action;
    if (ev.optimized_two_action) {
        j["g_up"] = ev.region.g_up;
        j["g_lo"] = ev.region.g_lo;
    }
    if (m.num_actions == 2) {
        for (BoundKind kind : {BoundKind::upper, BoundKind::lower}) {
            Algorithm1Result r = optimize_f_two_action(m, kind, ev.eps_strict);
            const char* status = r.status == Algorithm1Result::Status::solved ? "solved"
                                 : r.status == Algorithm1Result::Status::no_solution
                                     ? "no_solution"
                                     : "infeasible";
            json a;
            a["status"] = status;
            a["alphas"] = r.alphas;
            a["f_star"] = r.f_star;
            j[kind == BoundKind::upper ? "algorithm1_up" : "algorithm1_lo"] = a;
        }
    }
    j["beliefs"] = json::array();
    for (const std::string& text : o.beliefs) {
        std::vector<double> pi = parse_point(text, m.num_states);
        PerBeliefBounds pb = ev.at(pi);
        json b;
        b["pi"] = pi;
        b["a_low"] = pb.a_low;
        b["a_high"] = pb.a_high;
        b["pinned"] = pb.pinned();
        j["beliefs"].push_back(b);
    }
    return j;
}

int run_bounds(const Options& o) {
    PomdpModel m = resolve_model(o);
    std::vector<double> rhos = rhos_or(o, {m.discount});
    json arr = json::array();
    for (double rho : rhos) {
        m.discount = rho;
        BoundsEvaluator ev = BoundsEvaluator::make(m);
        json j = bounds_json(m, ev, o);
        arr.push_back(j);
        std::printf("rho=%s: optimized_two_action=%s", fmt(rho, 2).c_str(),
                    ev.optimized_two_action ? "yes" : "no");
        for (const auto& b : j["beliefs"])
            std::printf("  [a_low=%d a_high=%d%s]", b["a_low"].get<int>(), b["a_high"].get<int>(),
                        b["pinned"].get<bool>() ? " pinned" : "");
        std::printf("\n");
    }
    json j = arr.size() == 1 ? arr[0] : arr;
    if (!o.out.empty()) {
        write_atomic(o.out, j.dump(2) + "\n");
        std::printf("wrote %s\n", o.out.c_str());
    }
    return 0;
}

// ------------------------------------------------------------------ volume
int run_volume(const Options& o) {
    PomdpModel m = resolve_model(o);
    std::vector<double> rhos = rhos_or(o, {m.discount});
    long samples = auto_vol_samples(o, m);
    std::string csv = "rho,samples,pinned,vol_S,std_error,seed\n";
    json arr = json::array();
    for (double rho : rhos) {
        m.discount = rho;
        BoundsEvaluator ev = BoundsEvaluator::make(m);
        VolumeEstimate v = estimate_overlap_volume(m, ev, nullptr, samples, o.seed, o.threads);
        csv += fmt(rho) + "," + std::to_string(v.samples) + "," + std::to_string(v.pinned) + "," +
               fmt(100.0 * v.fraction) + "," + fmt(100.0 * v.std_error) + "," +
               std::to_string(v.seed) + "\n";
        json j;
        j["rho"] = rho;
        j["samples"] = v.samples;
        j["pinned"] = v.pinned;
        j["vol_S_percent"] = 100.0 * v.fraction;
        j["std_error_percent"] = 100.0 * v.std_error;
        j["seed"] = v.seed;
        arr.push_back(j);
        std::printf("rho=%s: vol(S) = %s%% (se %s%%, %ld samples)\n", fmt(rho, 2).c_str(),
                    fmt(100.0 * v.fraction, 2).c_str(), fmt(100.0 * v.std_error, 3).c_str(),
                    v.samples);
    }
    emit(o, csv, arr);
    return 0;
}

// -------------------------------------------------------------------- loss
int run_loss(const Options& o) {
    PomdpModel m = resolve_model(o);
    std::vector<double> rhos = rhos_or(o, {m.discount});
    std::optional<std::vector<double>> pi0;
    if (!o.pi0.empty()) pi0 = parse_point(o.pi0, m.num_states);
    int d = auto_grid(o, m);
    std::string csv = "rho,loss_percent,pi0,runs,horizon,seed,numerator,num_se,denominator,den_se\n";
    json arr = json::array();
    for (double rho : rhos) {
        m.discount = rho;
        BoundsEvaluator ev = BoundsEvaluator::make(m);
        ValueFunctionGrid oracle = grid_value_iteration(m, d);
        LossOptions lopt;
        lopt.runs = o.runs;
        lopt.horizon = o.horizon;
        lopt.seed = o.seed;
        LossEstimate loss = percent_loss(m, ev, oracle, pi0, lopt);
        double lp = loss.not_applicable ? std::nan("") : loss.loss_percent;
        csv += fmt(rho) + "," + fmt(lp) + "," + loss.pi0_kind + "," + std::to_string(o.runs) +
               "," + std::to_string(o.horizon) + "," + std::to_string(o.seed) + "," +
               fmt(loss.numerator.mean) + "," + fmt(loss.numerator.std_error) + "," +
               fmt(loss.denominator.mean) + "," + fmt(loss.denominator.std_error) + "\n";
        json j;
        j["rho"] = rho;
        j["loss_percent"] = lp;
        j["pi0"] = loss.pi0_kind;
        j["not_applicable"] = loss.not_applicable;
        j["numerator"] = {{"mean", loss.numerator.mean}, {"std_error", loss.numerator.std_error}};
        j["denominator"] = {{"mean", loss.denominator.mean}, {"std_error", loss.denominator.std_error}};
        arr.push_back(j);
        std::printf("rho=%s: loss = %s%% (pi0 %s, %d runs x horizon %d)\n", fmt(rho, 2).c_str(),
                    fmt(lp, 2).c_str(), loss.pi0_kind.c_str(), o.runs, o.horizon);
    }
    emit(o, csv, arr);
    return 0;
}

// ------------------------------------------------------------------- sweep
SweepOptions sweep_options(const Options& o, const PomdpModel& m) {
    SweepOptions s;
    s.rhos = rhos_or(o, s.rhos);
    s.runs = o.runs;
    s.horizon = o.horizon;
    s.vol_samples = auto_vol_samples(o, m);
    s.grid_d = auto_grid(o, m);
    s.seed = o.seed;
    s.threads = o.threads;
    if (!o.pi0.empty())
        s.pi0_fixed = parse_point(o.pi0, m.num_states);
    else
        s.pi0_fixed = default_pi0(o.example, m.num_states);
    return s;
}

json sweep_rows_json(const std::vector<SweepRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json j;
        j["rho"] = r.rho;
        j["ok"] = r.ok;
        if (!r.note.empty()) j["note"] = r.note;
        if (r.ok) {
            j["vol_S_percent"] = 100.0 * r.vol.fraction;
            if (r.has_l1) j["L1_percent"] = r.l1.not_applicable ? json() : json(r.l1.loss_percent);
            if (r.has_l2) j["L2_percent"] = r.l2.not_applicable ? json() : json(r.l2.loss_percent);
        }
        arr.push_back(j);
    }
    return arr;
}

void print_sweep_rows(const std::vector<SweepRow>& rows) {
    std::printf("%6s %10s %10s %10s\n", "rho", "vol_S", "L1", "L2");
    for (const auto& r : rows) {
        if (!r.ok) {
            std::printf("%6s %s\n", fmt(r.rho, 2).c_str(), r.note.c_str());
            continue;
        }
        std::printf("%6s %10s %10s %10s\n", fmt(r.rho, 2).c_str(),
                    fmt(100.0 * r.vol.fraction, 2).c_str(),
                    r.has_l1 && !r.l1.not_applicable ? fmt(r.l1.loss_percent, 2).c_str() : "NA",
                    r.has_l2 && !r.l2.not_applicable ? fmt(r.l2.loss_percent, 2).c_str() : "NA");
    }
}

int run_sweep(const Options& o) {
    if (o.example == "4" && o.theta.empty()) {
        // parametric family: sweep the admissible theta grid
        PomdpModel probe = builtin_example("4", 0.25, 0.35);
        SweepOptions s = sweep_options(o, probe);
        std::vector<Example4Summary> summary;
        std::vector<Example4Cell> cells = sweep_example4(s, {}, &summary);
        std::printf("%6s %9s %9s %8s %8s %8s %8s\n", "rho", "vol_best", "vol_worst", "L1_best",
                    "L1_worst", "L2_best", "L2_worst");
        for (const auto& su : summary)
            std::printf("%6s %9s %9s %8s %8s %8s %8s\n", fmt(su.rho, 2).c_str(),
                        fmt(su.vol_best, 2).c_str(), fmt(su.vol_worst, 2).c_str(),
                        fmt(su.l1_best, 2).c_str(), fmt(su.l1_worst, 2).c_str(),
                        fmt(su.l2_best, 2).c_str(), fmt(su.l2_worst, 2).c_str());
        json arr = json::array();
        for (const auto& c : cells) {
            json j = sweep_rows_json({c.row})[0];
            j["theta1"] = c.theta1;
            j["theta2"] = c.theta2;
            arr.push_back(j);
        }
        emit(o, example4_to_csv(cells), arr);
        return 0;
    }
    PomdpModel m = resolve_model(o);
    SweepOptions s = sweep_options(o, m);
    std::vector<SweepRow> rows = sweep_discount(m, s);
    print_sweep_rows(rows);
    emit(o, sweep_to_csv(rows), sweep_rows_json(rows));
    return 0;
}

// --------------------------------------------------------------- reproduce
// Published benchmark tables (percent). Column layouts follow the source.
const double kPub1a[6][4] = {{0.4, 95.3, 0.30, 16.6}, {0.5, 94.2, 0.61, 13.9},
                             {0.6, 92.4, 1.56, 11.8}, {0.7, 90.2, 1.63, 9.1},
                             {0.8, 87.4, 1.44, 6.3},  {0.9, 84.1, 1.00, 3.2}};
const double kPub1b[6][6] = {{0.4, 64.27, 7.73, 12.88, 6.92, 454.31},
                             {0.5, 55.27, 8.58, 12.36, 8.99, 298.51},
                             {0.6, 46.97, 8.97, 11.91, 12.4, 205.50},
                             {0.7, 39.87, 8.93, 11.26, 14.4, 136.31},
                             {0.8, 34.51, 10.9, 12.49, 17.7, 88.19},
                             {0.9, 29.62, 11.2, 12.24, 20.5, 52.16}};
const double kPub1c[6][4] = {{0.4, 61.4, 2.5, 10.1}, {0.5, 56.2, 2.3, 6.9},
                             {0.6, 47.8, 1.7, 4.9},  {0.7, 40.7, 1.4, 3.5},
                             {0.8, 34.7, 1.1, 2.3},  {0.9, 31.8, 0.7, 1.4}};
const double kPub1d[6][7] = {{0.4, 98.9, 84.5, 0.10, 6.17, 1.45, 1.71},
                             {0.5, 98.6, 80.0, 0.18, 7.75, 1.22, 1.50},
                             {0.6, 98.4, 75.0, 0.23, 11.62, 1.00, 1.31},
                             {0.7, 98.1, 68.9, 0.26, 14.82, 0.75, 1.10},
                             {0.8, 97.8, 61.5, 0.27, 19.74, 0.51, 0.89},
                             {0.9, 97.6, 52.8, 0.25, 24.08, 0.26, 0.61}};
const std::vector<double> kLadder = {0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

struct Triple {
    std::string name;
    double computed = std::nan("");
    double published = std::nan("");
    double dev() const { return std::fabs(computed - published); }
};

// One reproduction row: computed next to published with absolute deviations.
struct RepRow {
    double rho = 0.0;
    std::vector<Triple> cols;
};

std::string rep_csv(const std::vector<RepRow>& rows) {
    std::string csv = "rho";
    for (const auto& t : rows.front().cols)
        csv += "," + t.name + "," + t.name + "_pub," + t.name + "_dev";
    csv += "\n";
    for (const auto& r : rows) {
        csv += fmt(r.rho);
        for (const auto& t : r.cols)
            csv += "," + fmt(t.computed) + "," + fmt(t.published) + "," + fmt(t.dev());
        csv += "\n";
    }
    return csv;
}

json rep_json(const std::string& table, const std::vector<RepRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json j;
        j["rho"] = r.rho;
        for (const auto& t : r.cols) {
            j[t.name] = std::isnan(t.computed) ? json() : json(t.computed);
            j[t.name + "_pub"] = t.published;
            j[t.name + "_dev"] = std::isnan(t.dev()) ? json() : json(t.dev());
        }
        arr.push_back(j);
    }
    return json{{"table", table}, {"rows", arr}};
}

void print_rep(const std::vector<RepRow>& rows) {
    std::printf("%5s", "rho");
    for (const auto& t : rows.front().cols) std::printf(" %26s", (t.name + " (pub, |dev|)").c_str());
    std::printf("\n");
    for (const auto& r : rows) {
        std::printf("%5s", fmt(r.rho, 2).c_str());
        for (const auto& t : r.cols) {
            std::string cell = fmt(t.computed, 2) + " (" + fmt(t.published, 2) + ", " +
                               fmt(t.dev(), 2) + ")";
            std::printf(" %26s", cell.c_str());
        }
        std::printf("\n");
    }
    std::printf("max |dev|:");
    for (size_t c = 0; c < rows.front().cols.size(); ++c) {
        double mx = 0.0;
        bool any = false;
        for (const auto& r : rows)
            if (!std::isnan(r.cols[c].dev())) {
                mx = std::max(mx, r.cols[c].dev());
                any = true;
            }
        std::printf(" %s=%s", rows.front().cols[c].name.c_str(), any ? fmt(mx, 2).c_str() : "NA");
    }
    std::printf("\n");
}

double loss_or_nan(const SweepRow& r, bool first) {
    const LossEstimate& l = first ? r.l1 : r.l2;
    bool has = first ? r.has_l1 : r.has_l2;
    if (!r.ok || !has || l.not_applicable) return std::nan("");
    return l.loss_percent;
}

int run_reproduce(const Options& o) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<RepRow> rows;
    std::string table = o.table;
    if (table == "1a" || table == "1c") {
        Options mo = o;
        mo.example = table == "1a" ? "1" : "3";
        PomdpModel m = resolve_model(mo);
        SweepOptions s = sweep_options(mo, m);
        s.rhos = kLadder;
        std::vector<SweepRow> rs = sweep_discount(m, s);
        const double(*pub)[4] = table == "1a" ? kPub1a : kPub1c;
        for (int i = 0; i < 6; ++i)
            rows.push_back({rs[i].rho,
                            {{"vol_S", rs[i].ok ? 100.0 * rs[i].vol.fraction : std::nan(""), pub[i][1]},
                             {"L1", loss_or_nan(rs[i], true), pub[i][2]},
                             {"L2", loss_or_nan(rs[i], false), pub[i][3]}}});
    } else if (table == "1b") {
        // vol and the discrete loss columns from the 10-state discrete model,
        // the continuous columns from its additive-gaussian variant
        Options mo = o;
        mo.example = "2d";
        PomdpModel md = resolve_model(mo);
        SweepOptions s = sweep_options(mo, md);
        s.rhos = kLadder;
        s.seed = mix_seed(o.seed, 11);
        std::vector<SweepRow> rd = sweep_discount(md, s);
        mo.example = "2g";
        PomdpModel mg = resolve_model(mo);
        SweepOptions sg = sweep_options(mo, mg);
        sg.rhos = kLadder;
        sg.seed = mix_seed(o.seed, 12);
        sg.vol_samples = 1000;  // region normals ignore the kernel; vol comes from the discrete run
        std::vector<SweepRow> rg = sweep_discount(mg, sg);
        for (int i = 0; i < 6; ++i)
            rows.push_back({rd[i].rho,
                            {{"vol_S", rd[i].ok ? 100.0 * rd[i].vol.fraction : std::nan(""), kPub1b[i][1]},
                             {"L1d", loss_or_nan(rd[i], true), kPub1b[i][2]},
                             {"L2d", loss_or_nan(rd[i], false), kPub1b[i][3]},
                             {"L1c", loss_or_nan(rg[i], true), kPub1b[i][4]},
                             {"L2c", loss_or_nan(rg[i], false), kPub1b[i][5]}}});
    } else if (table == "1d") {
        Options mo = o;
        mo.example = "4";
        PomdpModel probe = builtin_example("4", 0.25, 0.35);
        SweepOptions s = sweep_options(mo, probe);
        s.rhos = kLadder;
        // the published best case sits near the degenerate diagonal, outside
        // the 0.05-step grid; cover it with one refinement cell
        std::vector<std::pair<double, double>> thetas = {{0.01, 0.01}};
        for (int i = 0; i < 5; ++i)
            for (int j = i; j < 5; ++j) thetas.push_back({0.05 + 0.1 * i, 0.05 + 0.1 * j});
        std::vector<Example4Summary> summary;
        sweep_example4(s, thetas, &summary);
        for (int i = 0; i < 6; ++i)
            rows.push_back({summary[i].rho,
                            {{"vol_best", summary[i].vol_best, kPub1d[i][1]},
                             {"vol_worst", summary[i].vol_worst, kPub1d[i][2]},
                             {"L1_best", summary[i].l1_best, kPub1d[i][3]},
                             {"L1_worst", summary[i].l1_worst, kPub1d[i][4]},
                             {"L2_best", summary[i].l2_best, kPub1d[i][5]},
                             {"L2_worst", summary[i].l2_worst, kPub1d[i][6]}}});
    } else {
        throw UsageError("--table must be one of 1a, 1b, 1c, 1d");
    }
    print_rep(rows);
    if (table != "1a")
        std::printf(
            "note: published loss columns rest on solver details the source does not pin\n"
            "down; vol is held to +/-3 points and loss is read qualitatively for %s.\n",
            table.c_str());
    if (table == "1d")
        std::printf(
            "note: L1 here starts at e1, the one corner pinned for every admissible theta;\n"
            "the published L1 column uses an unstated, evidently unpinned prior.\n");
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("elapsed %.1fs\n", secs);
    emit(o, rep_csv(rows), rep_json(table, rows));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "myopic policy bounds for discounted-cost POMDPs: assumption checks,\n"
        "bound construction, and evaluation metrics.\n"
        "Grid defaults: d=100 for 3-state models, d=12 for 8..10-state models\n"
        "(lattice size grows combinatorially with the state count).\n"
        "Tables 1b/1c take several minutes at published budgets."};
    app.require_subcommand(1);
    Options o;

    CLI::App* validate = app.add_subcommand("validate", "structural model checks");
    add_model_flags(validate, o);
    add_output_flags(validate, o);

    CLI::App* check = app.add_subcommand("check", "assumption report (a1..a5), JSON artifact");
    add_model_flags(check, o);
    check->add_option("--rho", o.rhos, "discount factor(s), default: model value");
    check->add_flag("--strict", o.strict, "exit 1 when any check fails");
    check->add_option("--out", o.out, "artifact output path (written atomically)");

    CLI::App* bounds = app.add_subcommand(
        "bounds", "cost transforms, overlap-region normals, per-belief action brackets (JSON)");
    add_model_flags(bounds, o);
    bounds->add_option("--rho", o.rhos, "discount factor(s), default: model value");
    bounds->add_option("--belief", o.beliefs, "belief to bracket, comma-separated, repeatable");
    bounds->add_option("--out", o.out, "artifact output path (written atomically)");

    CLI::App* volume = app.add_subcommand("volume", "Monte-Carlo volume of the overlap region");
    add_model_flags(volume, o);
    volume->add_option("--rho", o.rhos, "discount factor(s), default: model value");
    volume->add_option("--seed", o.seed, "master seed");
    volume->add_option("--volume-samples", o.vol_samples, "samples (default 1e6, 1e5 when X>3)");
    volume->add_option("--threads", o.threads, "worker threads (result is thread-invariant)");
    add_output_flags(volume, o);

    CLI::App* loss = app.add_subcommand("loss", "percentage optimality loss of the pinned policy");
    add_model_flags(loss, o);
    loss->add_option("--rho", o.rhos, "discount factor(s), default: model value");
    loss->add_option("--pi0", o.pi0, "fixed prior, comma-separated (default: sampled outside S)");
    loss->add_option("--runs", o.runs, "simulation runs (default 1000)");
    loss->add_option("--horizon", o.horizon, "simulation horizon (default 100)");
    loss->add_option("--seed", o.seed, "master seed");
    loss->add_option("--grid", o.grid_d, "value-iteration lattice resolution");
    add_output_flags(loss, o);

    CLI::App* sweep = app.add_subcommand(
        "sweep", "vol/L1/L2 across the discount ladder (example 4: admissible theta grid)");
    add_model_flags(sweep, o);
    sweep->add_option("--rho", o.rhos, "discount ladder (default 0.4..0.9)");
    sweep->add_option("--pi0", o.pi0, "fixed L1 prior (default: the published pinned corner)");
    sweep->add_option("--runs", o.runs, "simulation runs (default 1000)");
    sweep->add_option("--horizon", o.horizon, "simulation horizon (default 100)");
    sweep->add_option("--seed", o.seed, "master seed");
    sweep->add_option("--volume-samples", o.vol_samples, "volume samples");
    sweep->add_option("--grid", o.grid_d, "value-iteration lattice resolution");
    sweep->add_option("--threads", o.threads, "worker threads");
    add_output_flags(sweep, o);

    CLI::App* reproduce = app.add_subcommand(
        "reproduce", "computed vs published benchmark table with absolute deviations");
    reproduce->add_option("--table", o.table, "1a, 1b, 1c, or 1d")->required();
    reproduce->add_option("--seed", o.seed, "master seed");
    reproduce->add_option("--runs", o.runs, "simulation runs (default 1000)");
    reproduce->add_option("--horizon", o.horizon, "simulation horizon (default 100)");
    reproduce->add_option("--volume-samples", o.vol_samples, "volume samples (default 1e6/1e5)");
    reproduce->add_option("--grid", o.grid_d, "value-iteration lattice resolution");
    reproduce->add_option("--threads", o.threads, "worker threads");
    add_output_flags(reproduce, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (validate->parsed()) return run_validate(o);
        if (check->parsed()) return run_check(o);
        if (bounds->parsed()) return run_bounds(o);
        if (volume->parsed()) return run_volume(o);
        if (loss->parsed()) return run_loss(o);
        if (sweep->parsed()) return run_sweep(o);
        if (reproduce->parsed()) return run_reproduce(o);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
