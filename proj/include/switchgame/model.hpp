#ifndef SWITCHGAME_MODEL_HPP
#define SWITCHGAME_MODEL_HPP

#include <array>
#include <string>
#include <vector>

namespace switchgame {

/// Problem instance of the two-player switching game on a geometric Brownian
/// motion.  Joint regime (i,j) means player I (maximizer) is in regime i and
/// player II (minimizer) in regime j; indices are 0-based in code, 1-based in
/// documentation and file formats.
///
/// Dynamics in regime (i,j):  dX = b_ij X dt + sigma_ij X dW, running profit
/// f(x) = x^gamma discounted at rate r.  Player I pays c12/c21 to switch his
/// regime, player II pays chi12/chi21; player II's costs enter the payoff
/// with a plus sign.
struct GameSpec {
    std::array<std::array<double, 2>, 2> drift{};  // b[i][j]
    std::array<std::array<double, 2>, 2> vol{};    // sigma[i][j] > 0
    double discount = 1.0;                         // r > 0
    double gamma = 0.5;                            // profit exponent in (0,1)
    double c12 = 0.0, c21 = 0.0;                   // player I switching costs
    double chi12 = 0.0, chi21 = 0.0;               // player II switching costs
    double x0 = 1.0;                               // initial state > 0

    double b(int i, int j) const { return drift[i][j]; }
    double sigma(int i, int j) const { return vol[i][j]; }

    /// Player I's cost for leaving regime `from` (0-based), 0 on the diagonal.
    double cost_max(int from, int to) const {
        if (from == to) return 0.0;
        return from == 0 ? c12 : c21;
    }
    /// Player II's cost, same convention.
    double cost_min(int from, int to) const {
        if (from == to) return 0.0;
        return from == 0 ? chi12 : chi21;
    }
};

/// Per-regime-pair constants: the two roots of
///   (1/2) sigma^2 m (m-1) + b m - r = 0
/// with m_plus > 1 and m_minus < 0, and the no-switch value coefficient
///   K = 1 / (r - b*gamma + (1/2) sigma^2 gamma (1-gamma)).
struct RegimeDerived {
    double m_plus;
    double m_minus;
    double K;
};

using ValidationReport = std::vector<std::string>;

/// Largest drift coefficient; used as the growth constant rho in the
/// discount-dominance check r > rho (exact for GBM first moments).
double max_drift(const GameSpec& spec);

/// Checks the standing assumptions.  Returns one entry per violation, empty
/// when the spec is admissible.  Never throws.
ValidationReport validate(const GameSpec& spec);

/// Derived constants for joint regime (i,j).  Throws std::invalid_argument
/// when the K denominator is not positive ("no-switch value undefined").
RegimeDerived derive(const GameSpec& spec, int i, int j);

/// No-switch value K_ij x^gamma.  Throws on x <= 0.
double no_switch_value(const GameSpec& spec, int i, int j, double x);

}  // namespace switchgame

#endif
