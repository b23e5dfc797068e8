#include "myopic/evaluation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

namespace myopic {

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t counter) {
    // splitmix64 step applied to the counter-th element of the stream
    std::uint64_t z = master + (counter + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::vector<double> sample_belief_uniform(std::mt19937_64& gen, int num_states) {
    std::vector<double> e(num_states);
    double s = 0.0;
    do {
        s = 0.0;
        for (int i = 0; i < num_states; ++i) {
            e[i] = -std::log(1.0 - uniform01(gen));
            s += e[i];
        }
    } while (s <= 0.0);
    for (int i = 0; i < num_states; ++i) e[i] /= s;
    return e;
}

int sample_categorical(std::mt19937_64& gen, const double* p, int n) {
    double u = uniform01(gen);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += p[i];
        if (u < acc) return i;
    }
    return n - 1;
}

static double normal_draw(std::mt19937_64& gen) {
    double u1 = 1.0 - uniform01(gen);  // (0, 1]
    double u2 = uniform01(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

VolumeEstimate estimate_overlap_volume(const PomdpModel& m, const BoundsEvaluator& ev,
                                       const ValueFunctionGrid* oracle, long samples,
                                       std::uint64_t seed, int threads) {
    (void)m;
    VolumeEstimate res;
    res.samples = samples;
    res.seed = seed;
    res.oracle_checked = oracle != nullptr;
    constexpr long kBlock = 65536;
    long nblocks = (samples + kBlock - 1) / kBlock;
    struct BlockStat {
        long pinned = 0, disagree = 0;
    };
    std::vector<BlockStat> stats(nblocks);
    std::atomic<long> next{0};
    auto work = [&]() {
        for (;;) {
            long b = next.fetch_add(1);
            if (b >= nblocks) return;
            std::mt19937_64 gen(mix_seed(seed, static_cast<std::uint64_t>(b)));
            long count = std::min(kBlock, samples - b * kBlock);
            BlockStat st;
            for (long i = 0; i < count; ++i) {
                std::vector<double> pi = sample_belief_uniform(gen, ev.model.num_states);
                PerBeliefBounds pb = ev.at(pi, false);
                if (pb.pinned()) {
                    ++st.pinned;
                    if (oracle && grid_greedy_action(ev.model, *oracle, pi) != pb.a_low)
                        ++st.disagree;
                }
            }
            stats[b] = st;
        }
    };
    int nt = std::max(1, threads);
    if (nt == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (const auto& st : stats) {
        res.pinned += st.pinned;
        res.oracle_disagreements += st.disagree;
    }
    res.fraction = samples > 0 ? static_cast<double>(res.pinned) / samples : 0.0;
    res.std_error =
        samples > 0 ? std::sqrt(std::max(0.0, res.fraction * (1.0 - res.fraction) / samples)) : 0.0;
    return res;
}

// Filter step for a continuous gaussian observation value.
static bool filter_continuous(const PomdpModel& m, const std::vector<double>& pi, double yval,
                              int a, std::vector<double>* post) {
    int X = m.num_states;
    std::vector<double> u = mat_tvec(m.transitions[a - 1], pi);
    const ObservationKernel& k = m.observations[a - 1];
    double s = 0.0;
    for (int x = 0; x < X; ++x) {
        u[x] *= k.density(x, yval);
        s += u[x];
    }
    if (s <= 1e-300) return false;
    for (int x = 0; x < X; ++x) u[x] /= s;
    *post = std::move(u);
    return true;
}

SimulationReport simulate_policy(const PomdpModel& m, const PolicyFn& policy,
                                 const StageCostFn& stage_cost, const PriorFn& prior, int horizon,
                                 int runs, std::uint64_t seed) {
    SimulationReport rep;
    rep.runs = runs;
    rep.horizon = horizon;
    rep.seed = seed;
    int X = m.num_states;
    double total = 0.0, total_sq = 0.0;
    for (int r = 0; r < runs; ++r) {
        std::mt19937_64 gen(mix_seed(seed, static_cast<std::uint64_t>(r)));
        std::vector<double> belief = prior(gen);
        int x = sample_categorical(gen, belief.data(), X);
        double disc = 1.0, acc = 0.0;
        for (int k = 0; k < horizon; ++k) {
            int a = policy(belief);
            acc += disc * stage_cost(belief, a);
            disc *= m.discount;
            const Matrix& P = m.transitions[a - 1];
            std::vector<double> row = P.row(x);
            int xn = sample_categorical(gen, row.data(), X);
            const ObservationKernel& kn = m.observations[a - 1];
            std::vector<double> post;
            bool ok = false;
            for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
                if (attempt > 0) ++rep.resampled_observations;
                if (kn.kind == ObservationKernel::Kind::gaussian) {
                    double yval = (xn + 1) + kn.sigma * normal_draw(gen);
                    ok = filter_continuous(m, belief, yval, a, &post);
                } else {
                    int y = sample_categorical(gen, kn.probs.row(xn).data(), kn.num_obs());
                    try {
                        post = belief_update(m, belief, y + 1, a).first;
                        ok = true;
                    } catch (const BeliefUpdateError&) {
                        ok = false;
                    }
                }
            }
            if (!ok) throw SolverError("simulate_policy: filter underflow persisted across retries");
            belief = std::move(post);
            x = xn;
        }
        total += acc;
        total_sq += acc * acc;
    }
    rep.mean = runs > 0 ? total / runs : 0.0;
    if (runs > 1) {
        double var = (total_sq - runs * rep.mean * rep.mean) / (runs - 1);
        rep.std_error = std::sqrt(std::max(0.0, var) / runs);
    }
    return rep;
}

LossEstimate percent_loss(const PomdpModel& m, const BoundsEvaluator& ev,
                          const ValueFunctionGrid& oracle,
                          const std::optional<std::vector<double>>& pi0_fixed,
                          const LossOptions& opt) {
    LossEstimate out;
    int X = m.num_states;

    PriorFn prior;
    if (pi0_fixed) {
        out.pi0_kind = "fixed";
        std::vector<double> p0 = *pi0_fixed;
        prior = [p0](std::mt19937_64&) { return p0; };
    } else {
        out.pi0_kind = "sampled-outside-overlap";
        // applicability probe: the rejection sampler needs some mass outside
        std::mt19937_64 probe(mix_seed(opt.seed, 0x9e3779b9ull));
        int outside = 0, probes = 20000;
        for (int i = 0; i < probes; ++i)
            if (!ev.at(sample_belief_uniform(probe, X), false).pinned()) ++outside;
        if (outside < probes / 1000) {  // overlap covers > 99.9%
            out.not_applicable = true;
            return out;
        }
        prior = [&ev, X](std::mt19937_64& gen) {
            for (int attempt = 0; attempt < 200000; ++attempt) {
                std::vector<double> pi = sample_belief_uniform(gen, X);
                if (!ev.at(pi, false).pinned()) return pi;
            }
            throw SolverError("percent_loss: cannot sample a prior outside the overlap region");
        };
    }

    // bound-induced policy: pinned action inside the overlap region, else action 1
    PolicyFn mu_tilde = [&ev](const std::vector<double>& pi) {
        PerBeliefBounds b = ev.at(pi, false);
        return b.pinned() ? b.a_low : 1;
    };
    StageCostFn true_cost = [&m](const std::vector<double>& pi, int a) {
        double s = 0.0;
        for (int x = 0; x < m.num_states; ++x) s += m.costs(x, a - 1) * pi[x];
        return s;
    };
    // surrogate cost for the oracle: true pinned cost inside, per-state
    // minimum outside (played action is ignored there)
    std::vector<double> cmin(X);
    for (int x = 0; x < X; ++x) {
        cmin[x] = m.costs(x, 0);
        for (int a = 1; a < m.num_actions; ++a) cmin[x] = std::min(cmin[x], m.costs(x, a));
    }
    StageCostFn surrogate_cost = [&m, &ev, cmin](const std::vector<double>& pi, int) {
        PerBeliefBounds b = ev.at(pi, false);
        double s = 0.0;
        for (int x = 0; x < m.num_states; ++x)
            s += (b.pinned() ? m.costs(x, b.a_low - 1) : cmin[x]) * pi[x];
        return s;
    };
    PolicyFn mu_star = [&m, &oracle](const std::vector<double>& pi) {
        return grid_greedy_action(m, oracle, pi);
    };

    out.numerator = simulate_policy(m, mu_tilde, true_cost, prior, opt.horizon, opt.runs, opt.seed);
    out.denominator =
        simulate_policy(m, mu_star, surrogate_cost, prior, opt.horizon, opt.runs, opt.seed);
    if (out.denominator.mean <= 1e-12) {
        out.not_applicable = true;
        return out;
    }
    out.loss_percent = 100.0 * (out.numerator.mean - out.denominator.mean) / out.denominator.mean;
    return out;
}

std::vector<SweepRow> sweep_discount(PomdpModel m, const SweepOptions& opt) {
    long vol_samples = opt.vol_samples > 0 ? opt.vol_samples : (m.num_states <= 3 ? 1000000 : 100000);
    int grid_d = opt.grid_d > 0 ? opt.grid_d : (m.num_states <= 3 ? 100 : 12);
    std::vector<SweepRow> rows;
    for (size_t ri = 0; ri < opt.rhos.size(); ++ri) {
        SweepRow row;
        row.rho = opt.rhos[ri];
        m.discount = row.rho;
        try {
            AssumptionReport rep = check_all(m, opt.eps_strict, opt.tol);
            if (!rep.overall) {
                std::string bad;
                if (!rep.a1) bad += " a1";
                if (!rep.a2) bad += " a2";
                if (!rep.a3.holds) bad += " a3";
                if (!rep.a4.holds) bad += " a4";
                if (!rep.a5.holds) bad += " a5";
                row.note = "assumption check failed:" + bad;
                rows.push_back(std::move(row));
                continue;
            }
            BoundsEvaluator ev = BoundsEvaluator::make(m, opt.eps_strict);
            row.vol = estimate_overlap_volume(m, ev, nullptr, vol_samples,
                                              mix_seed(opt.seed, 100 + ri), opt.threads);
            if (opt.with_loss) {
                ValueFunctionGrid oracle = grid_value_iteration(m, grid_d, 1e-6);
                LossOptions lo;
                lo.runs = opt.runs;
                lo.horizon = opt.horizon;
                lo.seed = mix_seed(opt.seed, 200 + ri);
                if (opt.pi0_fixed) {
                    row.l1 = percent_loss(m, ev, oracle, opt.pi0_fixed, lo);
                    row.has_l1 = true;
                }
                lo.seed = mix_seed(opt.seed, 300 + ri);
                row.l2 = percent_loss(m, ev, oracle, std::nullopt, lo);
                row.has_l2 = true;
            }
            row.ok = true;
        } catch (const std::exception& e) {
            row.ok = false;
            row.note = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Example4Cell> sweep_example4(const SweepOptions& opt,
                                         const std::vector<std::pair<double, double>>& thetas,
                                         std::vector<Example4Summary>* summary) {
    std::vector<std::pair<double, double>> grid = thetas;
    if (grid.empty()) {
        for (int i = 0; i < 5; ++i)
            for (int j = i; j < 5; ++j)
                grid.push_back({0.05 + 0.1 * i, 0.05 + 0.1 * j});
    }
    std::vector<Example4Cell> cells;
    for (const auto& [t1, t2] : grid) {
        PomdpModel m = builtin_example("4", t1, t2);
        SweepOptions o = opt;
        std::vector<SweepRow> rows = sweep_discount(m, o);
        for (auto& r : rows) {
            Example4Cell cell;
            cell.theta1 = t1;
            cell.theta2 = t2;
            cell.row = std::move(r);
            cells.push_back(std::move(cell));
        }
    }
    if (summary) {
        summary->clear();
        for (size_t ri = 0; ri < opt.rhos.size(); ++ri) {
            Example4Summary s;
            s.rho = opt.rhos[ri];
            bool first = true;
            for (const auto& cell : cells) {
                if (cell.row.rho != s.rho || !cell.row.ok) continue;
                double v = 100.0 * cell.row.vol.fraction;
                double l1 = cell.row.has_l1 && !cell.row.l1.not_applicable
                                ? cell.row.l1.loss_percent
                                : std::numeric_limits<double>::quiet_NaN();
                double l2 = cell.row.has_l2 && !cell.row.l2.not_applicable
                                ? cell.row.l2.loss_percent
                                : std::numeric_limits<double>::quiet_NaN();
                if (first) {
                    s.vol_best = s.vol_worst = v;
                    s.l1_best = s.l1_worst = l1;
                    s.l2_best = s.l2_worst = l2;
                    first = false;
                } else {
                    s.vol_best = std::max(s.vol_best, v);
                    s.vol_worst = std::min(s.vol_worst, v);
                    auto upd = [](double& best, double& worst, double x) {
                        if (std::isnan(x)) return;
                        if (std::isnan(best) || x < best) best = x;
                        if (std::isnan(worst) || x > worst) worst = x;
                    };
                    upd(s.l1_best, s.l1_worst, l1);
                    upd(s.l2_best, s.l2_worst, l2);
                }
            }
            summary->push_back(s);
        }
    }
    return cells;
}

static std::string fmt(double v) {
    if (std::isnan(v)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

static std::string row_metrics(const SweepRow& r) {
    std::string s = fmt(100.0 * r.vol.fraction);
    s += ",";
    s += (r.has_l1 && !r.l1.not_applicable) ? fmt(r.l1.loss_percent) : "NA";
    s += ",";
    s += (r.has_l2 && !r.l2.not_applicable) ? fmt(r.l2.loss_percent) : "NA";
    return s;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "rho,vol_S,L1,L2\n";
    for (const auto& r : rows) {
        out += fmt(r.rho) + ",";
        out += r.ok ? row_metrics(r) : "NA,NA,NA";
        out += "\n";
    }
    return out;
}

std::string example4_to_csv(const std::vector<Example4Cell>& cells) {
    std::string out = "rho,vol_S,L1,L2,theta1,theta2\n";
    for (const auto& c : cells) {
        out += fmt(c.row.rho) + ",";
        out += c.row.ok ? row_metrics(c.row) : "NA,NA,NA";
        out += "," + fmt(c.theta1) + "," + fmt(c.theta2) + "\n";
    }
    return out;
}

}  // namespace myopic
