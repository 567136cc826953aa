#ifndef SWITCHGAME_MONTECARLO_HPP
#define SWITCHGAME_MONTECARLO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "switchgame/closedform.hpp"
#include "switchgame/model.hpp"

namespace switchgame {

enum class RuleKind { Never, Always, SwitchAbove, SwitchBelow };

struct Rule {
    RuleKind kind = RuleKind::Never;
    double threshold = 0.0;
};

/// Closed-loop threshold strategies, one rule per player per own regime.
/// Player I's rule in regime i moves him to the other regime at cost
/// c(i,k); player II's at cost chi(j,l) (entering the payoff with +).
struct ThresholdStrategy {
    Rule max_rule[2];
    Rule min_rule[2];

    static Rule from_region(const Region& r) {
        switch (r.kind) {
            case RegionKind::Empty: return {RuleKind::Never, 0.0};
            case RegionKind::All: return {RuleKind::Always, 0.0};
            case RegionKind::LowerClosed: return {RuleKind::SwitchBelow, r.threshold};
            case RegionKind::UpperClosed: return {RuleKind::SwitchAbove, r.threshold};
        }
        return {};
    }
};

/// Reads both players' rules off a Solution's switching regions.  The
/// covered cells always give each player the same rule in both of the other
/// player's regimes; this is checked.
ThresholdStrategy strategy_from(const Solution& sol);

struct SimConfig {
    long paths = 10000;
    double dt = 1e-3;
    double horizon = 0.0;  // 0 = max(20/r, 50); must keep r*horizon >= 20
    std::uint64_t seed = 1;
    bool antithetic = false;
    int threads = 0;  // 0 = hardware concurrency
    /// Each step's increment is assembled from this many unit normals
    /// (normalized sum).  Running once at (dt, 2) and once at (dt/2, 1) with
    /// the same seed drives both runs with the same Brownian path, so the
    /// dt-refinement check measures pure discretization effects.
    int substeps = 1;
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    long samples = 0;
};

struct TraceRow {
    long path;
    double t;
    double x;
    int i, j;
    double cumulative_payoff;
};

/// Diagnostics gathered along the paths (cost-sum bounds, state moments).
struct SimStats {
    Estimate payoff;
    double max_cost_prefix_max = 0.0;  // max over paths/time of -sum e^{-r tau} c
    double min_cost_prefix_min = 0.0;  // min over paths/time of  sum e^{-r rho} chi
    double mean_x_t1 = 0.0, se_x_t1 = 0.0;  // X at t = 1
    double mean_x_t5 = 0.0, se_x_t5 = 0.0;  // X at t = 5
};

double default_horizon(const GameSpec& spec);

/// Monte Carlo estimate of the payoff from joint regime (i0,j0) and state
/// spec.x0 under the given threshold strategies.  Log-normal exact stepping
/// within a regime; crossings detected on the post-step state.  Results are
/// bit-identical for a fixed (seed, paths) across thread counts.
Estimate simulate_payoff(const GameSpec& spec, int i0, int j0,
                         const ThresholdStrategy& strat, const SimConfig& config);

/// Same estimator, also collecting diagnostics and (optionally, capped at
/// 100 paths) per-path traces.
SimStats simulate_stats(const GameSpec& spec, int i0, int j0,
                        const ThresholdStrategy& strat, const SimConfig& config,
                        std::vector<TraceRow>* trace = nullptr, long trace_paths = 0,
                        long trace_stride = 100);

struct Perturbation {
    int player;  // 0 = maximizer, 1 = minimizer
    int regime;  // own regime whose rule is replaced
    Rule rule;
    std::string label;
};

struct ProbeRow {
    std::string label;
    Estimate estimate;
    double closed_form;
    bool ok;  // perturbing player did not improve beyond 3 SE
};

struct DominanceReport {
    std::vector<ProbeRow> rows;
    bool all_ok = true;
};

/// Saddle-point probe: replaces one rule at a time and checks the perturbing
/// player cannot improve on the closed-form value by more than 3 SE.
DominanceReport dominance_probe(const GameSpec& spec, const Solution& sol, int i0,
                                int j0, const SimConfig& config,
                                const std::vector<Perturbation>& perturbations);

/// Convenience: the + / -10% threshold perturbations of every finite
/// threshold rule, plus a finite deviation for each "never" rule.
std::vector<Perturbation> default_perturbations(const GameSpec& spec,
                                                const ThresholdStrategy& strat);

}  // namespace switchgame

#endif
