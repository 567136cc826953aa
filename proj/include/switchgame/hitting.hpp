#ifndef SWITCHGAME_HITTING_HPP
#define SWITCHGAME_HITTING_HPP

#include <limits>
#include <vector>

#include "switchgame/model.hpp"
#include "switchgame/montecarlo.hpp"

namespace switchgame {

/// First-passage functionals of the GBM with regime pair (i,j).
/// Barriers at 0 or +inf stand for "never hit" and give the monotone limits.
///
/// R1(x,a)   = E[e^{-r tau_a}]            = (x/a)^{m+} (a > x), (x/a)^{m-} (a < x)
/// R2(x,a,b) = E[e^{-r tau_ab}]           = R1(x,a) R1(a,b)   (strong Markov)
/// R3(x,a,b) = E[e^{-r tau_a} 1_{tau_a < tau_b}]   (two-barrier)
/// F1(x,a)   = E[int_0^{tau_a} e^{-rt} f(X_t) dt] = Vhat(x) - R1(x,a) Vhat(a)
/// F2(x,a,b) = E[int_{tau_a}^{tau_ab} ...]        = R1(x,a) F1(a,b)
/// F3(x,a,b) = E[int_0^{tau_a ^ tau_b} ...]
double laplace_hit(const GameSpec& spec, int i, int j, double x, double a);
double laplace_two_stage(const GameSpec& spec, int i, int j, double x, double a, double b);
double laplace_exit(const GameSpec& spec, int i, int j, double x, double a, double b);
double profit_until(const GameSpec& spec, int i, int j, double x, double a);
double profit_between(const GameSpec& spec, int i, int j, double x, double a, double b);
double profit_until_exit(const GameSpec& spec, int i, int j, double x, double a, double b);

/// The threshold triple of the fixed region structure handled here:
///   player I  switches 1 -> 2 on [x12, inf)  paying c12,
///   player I  switches 2 -> 1 on (0, y21]    paying c21,
///   player II switches 1 -> 2 on [x12p, inf) paying chi12, never back.
/// Sentinels: y21 = 0 (never), x12p = 0 (always) or +inf (never),
/// x12 = +inf (never).
struct RegionTuple {
    double y21 = 0.0;
    double x12_prime = std::numeric_limits<double>::infinity();
    double x12 = std::numeric_limits<double>::infinity();
};

struct JValues {
    double j[2][2];  // payoff from joint regime (i,j)
};

struct HittingOptions {
    /// Use regime (1,1)'s diffusion pair for every leg (the single-diffusion
    /// reading of the procedure) instead of the joint regime in force.
    bool single_diffusion = false;
};

/// Payoffs of the four starting regimes under the tuple's strategy profile,
/// assembled from the first-passage functionals and the renewal fixed point
/// at x12.  Throws on tuples violating the ordering constraint.
JValues j_values(const GameSpec& spec, double x, const RegionTuple& regions,
                 const HittingOptions& opts = {});

/// Threshold strategies realizing the tuple, for Monte Carlo cross-checks.
ThresholdStrategy strategy_from_tuple(const RegionTuple& regions);

struct SearchGrids {
    std::vector<double> y21;        // may include 0 (never)
    std::vector<double> x12_prime;  // may include 0 (always) and +inf (never)
    std::vector<double> x12;        // may include +inf (never)
};

/// Log-spaced default grids around the starting state.
SearchGrids default_grids(const GameSpec& spec, int points_per_axis = 64);

struct SurfaceRow {
    double y21, x12_prime, x12;
    double value;
};

struct SearchResult {
    RegionTuple best;
    double value = 0.0;        // min over x12' of max over (y21, x12)
    double maxmin_value = 0.0; // max over (y21, x12) of min over x12'
    double minmax_gap = 0.0;
    std::vector<SurfaceRow> surface;
};

/// Exhaustive min-max / max-min search over the grids for the payoff from
/// joint regime (i0,j0) at state x.  Player II picks x12' (minimizing),
/// player I picks (y21, x12).  Ties break toward the smallest grid index.
SearchResult threshold_search(const GameSpec& spec, double x, int i0, int j0,
                              const SearchGrids& grids, const HittingOptions& opts = {});

}  // namespace switchgame

#endif
