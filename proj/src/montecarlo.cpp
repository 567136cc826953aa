#include "switchgame/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "switchgame/rootfind.hpp"

namespace switchgame {

namespace {

// splittable 64-bit generator; per-path substreams keyed by (seed, path)
struct SplitMix64 {
    std::uint64_t s;
    std::uint64_t next() {
        std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

struct Xoshiro256pp {
    std::uint64_t s[4];
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& w : s) w = sm.next();
    }
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t next() {
        const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }
    double uniform() {  // open (0,1)
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }
    // Box-Muller pair, second draw cached
    double spare = 0.0;
    bool has_spare = false;
    double normal() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        const double u1 = uniform(), u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 6.283185307179586477 * u2;
        spare = mag * std::sin(ang);
        has_spare = true;
        return mag * std::cos(ang);
    }
};

std::uint64_t path_seed(std::uint64_t seed, long path) {
    SplitMix64 sm{seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(path + 1))};
    return sm.next();
}

bool fires(const Rule& r, double logx, double logt) {
    switch (r.kind) {
        case RuleKind::Never: return false;
        case RuleKind::Always: return true;
        case RuleKind::SwitchAbove: return logx >= logt;
        case RuleKind::SwitchBelow: return logx <= logt;
    }
    return false;
}

struct Precomp {
    double c1[2][2], c2[2][2];      // log step: c1 + c2 * z
    double log_thr_max[2], log_thr_min[2];
    double e_full, e_half;          // per-step discount factors
    double dt, gamma, log_x0;
    long steps, probe1, probe5;
    int substeps = 1;
    double sub_scale = 1.0;         // 1/sqrt(substeps)
};

struct PathOut {
    double payoff;
    double cost_prefix_max;  // max over time of -sum e^{-r tau} c
    double cost_prefix_min;  // min over time of  sum e^{-r rho} chi
    double x_t1, x_t5;
};

PathOut run_path(const GameSpec& spec, int i0, int j0, const ThresholdStrategy& st,
                 const Precomp& pre, std::uint64_t stream_seed, double sign,
                 std::vector<TraceRow>* trace, long path_id, long trace_stride) {
    Xoshiro256pp rng(stream_seed);
    int i = i0, j = j0;
    double logx = pre.log_x0;
    double disc = 1.0;
    double profit = 0.0, sum_c = 0.0, sum_chi = 0.0;
    PathOut out{};
    out.cost_prefix_max = 0.0;
    out.cost_prefix_min = 0.0;

    auto instant_switches = [&]() {
        for (int guard = 0;; ++guard) {
            if (guard > 8)
                throw std::runtime_error(
                    "simulate: strategy switches back and forth at one instant");
            bool moved = false;
            if (fires(st.max_rule[i], logx, pre.log_thr_max[i])) {
                const int k = 1 - i;
                sum_c += disc * spec.cost_max(i, k);
                out.cost_prefix_max = std::max(out.cost_prefix_max, -sum_c);
                i = k;
                moved = true;
            }
            if (fires(st.min_rule[j], logx, pre.log_thr_min[j])) {
                const int l = 1 - j;
                sum_chi += disc * spec.cost_min(j, l);
                out.cost_prefix_min = std::min(out.cost_prefix_min, sum_chi);
                j = l;
                moved = true;
            }
            if (!moved) break;
        }
    };

    instant_switches();
    double fprev = std::exp(pre.gamma * logx);
    const long stride = std::max<long>(1, trace_stride);
    if (trace) trace->push_back({path_id, 0.0, std::exp(logx), i, j, 0.0});

    for (long k = 0; k < pre.steps; ++k) {
        double w = 0.0;
        for (int c = 0; c < pre.substeps; ++c) w += rng.normal();
        const double z = sign * pre.sub_scale * w;
        logx += pre.c1[i][j] + pre.c2[i][j] * z;
        const double disc_mid = disc * pre.e_half;
        disc *= pre.e_full;
        const double f = std::exp(pre.gamma * logx);
        profit += disc_mid * 0.5 * (fprev + f) * pre.dt;
        fprev = f;
        instant_switches();
        if (k + 1 == pre.probe1) out.x_t1 = std::exp(logx);
        if (k + 1 == pre.probe5) out.x_t5 = std::exp(logx);
        if (trace && ((k + 1) % stride == 0 || k + 1 == pre.steps))
            trace->push_back({path_id, (k + 1) * pre.dt, std::exp(logx), i, j,
                              profit - sum_c + sum_chi});
    }
    out.payoff = profit - sum_c + sum_chi;
    return out;
}

Precomp make_precomp(const GameSpec& spec, const ThresholdStrategy& st,
                     const SimConfig& cfg, double horizon) {
    Precomp pre{};
    pre.dt = cfg.dt;
    pre.gamma = spec.gamma;
    pre.log_x0 = std::log(spec.x0);
    const double sdt = std::sqrt(cfg.dt);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double b = spec.b(i, j), s = spec.sigma(i, j);
            pre.c1[i][j] = (b - 0.5 * s * s) * cfg.dt;
            pre.c2[i][j] = s * sdt;
        }
    for (int k = 0; k < 2; ++k) {
        pre.log_thr_max[k] = st.max_rule[k].threshold > 0.0
                                 ? std::log(st.max_rule[k].threshold)
                                 : 0.0;
        pre.log_thr_min[k] = st.min_rule[k].threshold > 0.0
                                 ? std::log(st.min_rule[k].threshold)
                                 : 0.0;
    }
    pre.e_full = std::exp(-spec.discount * cfg.dt);
    pre.e_half = std::exp(-0.5 * spec.discount * cfg.dt);
    pre.steps = static_cast<long>(std::llround(horizon / cfg.dt));
    pre.probe1 = static_cast<long>(std::llround(1.0 / cfg.dt));
    pre.probe5 = static_cast<long>(std::llround(5.0 / cfg.dt));
    pre.substeps = std::max(1, cfg.substeps);
    pre.sub_scale = 1.0 / std::sqrt(static_cast<double>(pre.substeps));
    return pre;
}

Estimate reduce(const std::vector<double>& samples) {
    Estimate e;
    e.samples = static_cast<long>(samples.size());
    if (samples.empty()) return e;
    e.mean = pairwise_sum(samples) / e.samples;
    if (e.samples > 1) {
        std::vector<double> sq(samples.size());
        for (size_t k = 0; k < samples.size(); ++k) {
            const double d = samples[k] - e.mean;
            sq[k] = d * d;
        }
        e.std_error = std::sqrt(pairwise_sum(sq) / (e.samples - 1) / e.samples);
    }
    return e;
}

void validate_config(const GameSpec& spec, const SimConfig& cfg, double horizon) {
    if (cfg.paths <= 0) throw std::invalid_argument("simulate: paths must be positive");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("simulate: dt must be positive");
    if (cfg.antithetic && cfg.paths % 2 != 0)
        throw std::invalid_argument("simulate: antithetic needs an even path count");
    if (spec.discount * horizon < 20.0 - 1e-9) {
        std::ostringstream os;
        os << "simulate: discount*horizon = " << spec.discount * horizon
           << " < 20; truncation bias would not be negligible";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

double default_horizon(const GameSpec& spec) {
    return std::max(20.0 / spec.discount, 50.0);
}

ThresholdStrategy strategy_from(const Solution& sol) {
    auto same = [](const Region& a, const Region& b) {
        return a.kind == b.kind && (a.kind == RegionKind::Empty ||
                                    a.kind == RegionKind::All || a.threshold == b.threshold);
    };
    for (int k = 0; k < 2; ++k) {
        if (!same(sol.region_max[k][0], sol.region_max[k][1]))
            throw std::logic_error("strategy_from: player I regions differ across columns");
        if (!same(sol.region_min[0][k], sol.region_min[1][k]))
            throw std::logic_error("strategy_from: player II regions differ across rows");
    }
    ThresholdStrategy st;
    for (int k = 0; k < 2; ++k) {
        st.max_rule[k] = ThresholdStrategy::from_region(sol.region_max[k][0]);
        st.min_rule[k] = ThresholdStrategy::from_region(sol.region_min[0][k]);
    }
    return st;
}

SimStats simulate_stats(const GameSpec& spec, int i0, int j0,
                        const ThresholdStrategy& strat, const SimConfig& config,
                        std::vector<TraceRow>* trace, long trace_paths,
                        long trace_stride) {
    const double horizon = config.horizon > 0.0 ? config.horizon : default_horizon(spec);
    validate_config(spec, config, horizon);
    const Precomp pre = make_precomp(spec, strat, config, horizon);

    const long n_samples = config.antithetic ? config.paths / 2 : config.paths;
    std::vector<double> samples(n_samples);
    std::vector<double> x1(n_samples), x5(n_samples);
    std::vector<double> pre_max(n_samples), pre_min(n_samples);

    // traces are serial and capped; run them up front so the sampled paths
    // are the same ones that enter the estimate
    if (trace && trace_paths > 0) {
        const long tp = std::min<long>({trace_paths, n_samples, 100});
        for (long p = 0; p < tp; ++p)
            run_path(spec, i0, j0, strat, pre, path_seed(config.seed, p), +1.0, trace, p,
                     trace_stride);
    }

    auto worker = [&](long lo, long hi) {
        for (long p = lo; p < hi; ++p) {
            const std::uint64_t s = path_seed(config.seed, p);
            PathOut a = run_path(spec, i0, j0, strat, pre, s, +1.0, nullptr, p, 0);
            if (config.antithetic) {
                PathOut b = run_path(spec, i0, j0, strat, pre, s, -1.0, nullptr, p, 0);
                samples[p] = 0.5 * (a.payoff + b.payoff);
                x1[p] = 0.5 * (a.x_t1 + b.x_t1);
                x5[p] = 0.5 * (a.x_t5 + b.x_t5);
                pre_max[p] = std::max(a.cost_prefix_max, b.cost_prefix_max);
                pre_min[p] = std::min(a.cost_prefix_min, b.cost_prefix_min);
            } else {
                samples[p] = a.payoff;
                x1[p] = a.x_t1;
                x5[p] = a.x_t5;
                pre_max[p] = a.cost_prefix_max;
                pre_min[p] = a.cost_prefix_min;
            }
        }
    };

    int nthreads = config.threads > 0
                       ? config.threads
                       : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::max(1, std::min<int>(nthreads, 64));
    if (nthreads == 1 || n_samples < 128) {
        worker(0, n_samples);
    } else {
        std::vector<std::thread> pool;
        const long chunk = (n_samples + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            const long lo = t * chunk, hi = std::min<long>(n_samples, lo + chunk);
            if (lo < hi) pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    SimStats stats;
    stats.payoff = reduce(samples);
    const Estimate e1 = reduce(x1), e5 = reduce(x5);
    stats.mean_x_t1 = e1.mean;
    stats.se_x_t1 = e1.std_error;
    stats.mean_x_t5 = e5.mean;
    stats.se_x_t5 = e5.std_error;
    for (long p = 0; p < n_samples; ++p) {
        stats.max_cost_prefix_max = std::max(stats.max_cost_prefix_max, pre_max[p]);
        stats.min_cost_prefix_min = std::min(stats.min_cost_prefix_min, pre_min[p]);
    }
    return stats;
}

Estimate simulate_payoff(const GameSpec& spec, int i0, int j0,
                         const ThresholdStrategy& strat, const SimConfig& config) {
    return simulate_stats(spec, i0, j0, strat, config).payoff;
}

std::vector<Perturbation> default_perturbations(const GameSpec& spec,
                                                const ThresholdStrategy& strat) {
    std::vector<Perturbation> out;
    auto add = [&](int player, int regime, const Rule& base, const Rule& partner) {
        const char* who = player == 0 ? "I" : "II";
        if (base.kind == RuleKind::SwitchAbove || base.kind == RuleKind::SwitchBelow) {
            for (double f : {0.9, 1.1}) {
                std::ostringstream os;
                os << "player " << who << " regime " << regime + 1 << " threshold x"
                   << f;
                out.push_back({player, regime, {base.kind, base.threshold * f}, os.str()});
            }
        } else if (base.kind == RuleKind::Never) {
            // a deviation must not bounce against the player's rule in the
            // regime it enters: orient it away from that rule's trigger side
            Rule dev{RuleKind::SwitchAbove, 2.0 * spec.x0};
            if (partner.kind == RuleKind::Always) return;
            if (partner.kind == RuleKind::SwitchAbove)
                dev = {RuleKind::SwitchBelow,
                       0.5 * std::min(spec.x0, partner.threshold)};
            else if (partner.kind == RuleKind::SwitchBelow)
                dev = {RuleKind::SwitchAbove,
                       2.0 * std::max(spec.x0, partner.threshold)};
            std::ostringstream os;
            os << "player " << who << " regime " << regime + 1 << " deviates from never";
            out.push_back({player, regime, dev, os.str()});
        }
    };
    for (int k = 0; k < 2; ++k) {
        add(0, k, strat.max_rule[k], strat.max_rule[1 - k]);
        add(1, k, strat.min_rule[k], strat.min_rule[1 - k]);
    }
    return out;
}

DominanceReport dominance_probe(const GameSpec& spec, const Solution& sol, int i0,
                                int j0, const SimConfig& config,
                                const std::vector<Perturbation>& perturbations) {
    DominanceReport rep;
    const ThresholdStrategy base = strategy_from(sol);
    const double v = sol.value[i0][j0](spec.x0);
    {
        ProbeRow row;
        row.label = "unperturbed";
        row.estimate = simulate_payoff(spec, i0, j0, base, config);
        row.closed_form = v;
        row.ok = std::fabs(row.estimate.mean - v) <= 3.0 * row.estimate.std_error;
        rep.all_ok = rep.all_ok && row.ok;
        rep.rows.push_back(row);
    }
    for (const Perturbation& p : perturbations) {
        ThresholdStrategy st = base;
        if (p.player == 0)
            st.max_rule[p.regime] = p.rule;
        else
            st.min_rule[p.regime] = p.rule;
        ProbeRow row;
        row.label = p.label;
        row.estimate = simulate_payoff(spec, i0, j0, st, config);
        row.closed_form = v;
        const double slack = 3.0 * row.estimate.std_error;
        row.ok = p.player == 0 ? row.estimate.mean <= v + slack
                               : row.estimate.mean >= v - slack;
        rep.all_ok = rep.all_ok && row.ok;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace switchgame
