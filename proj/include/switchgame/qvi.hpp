#ifndef SWITCHGAME_QVI_HPP
#define SWITCHGAME_QVI_HPP

#include <string>
#include <vector>

#include "switchgame/closedform.hpp"
#include "switchgame/model.hpp"
#include "switchgame/piecewise.hpp"

namespace switchgame {

/// Which branch of the solvability lemma certifies a point:
///   A1 continuation (generator equation holds),
///   A2 player I's obstacle binds,
///   A3 player II's obstacle binds.
enum class QviTag { A1, A2, A3, Violation };
const char* to_string(QviTag t);

struct QviPoint {
    double x;
    int i, j;
    double generator_residual;  // r v - L v - f
    double obstacle_max;        // v - M[v]
    double obstacle_min;        // v - N[v]
    QviTag tag;
};

struct QviReport {
    std::vector<double> grid;
    std::vector<QviPoint> points;  // grid-major, 4 regimes per grid point
    double worst_residual = 0.0;   // scaled sup-norm of both composite systems
    int violations = 0;

    const QviPoint& at(size_t grid_index, int i, int j) const {
        return points[4 * grid_index + 2 * i + j];
    }
};

struct GridSpec {
    int points = 400;
    double lo = 0.0;  // 0 = automatic (a decade beyond every threshold)
    double hi = 0.0;
    double breakpoint_offset = 1e-7;  // relative nudge away from breakpoints
};

/// Composite residual tolerance (scaled) and the one-sided slack allowed on
/// inequalities that may be numerically zero.
inline constexpr double kQviTol = 1e-8;
/// Smooth-fit jump tolerance (relative).
inline constexpr double kSmoothTol = 1e-9;

/// r v - L_ij v - x^gamma with the analytic per-piece derivatives.  Throws
/// when x is within 1e-12 (relative) of an interior breakpoint.
double apply_generator(const GameSpec& spec, int i, int j, const PiecewiseValue& v,
                       double x);

/// M_ij[v](x) = max_{k != i} v_kj(x) - c_ik  (single alternative for d = 2).
double intervention_max(const GameSpec& spec, const Solution& sol, int i, int j, double x);
/// N_ij[v](x) = min_{l != j} v_il(x) + chi_jl.
double intervention_min(const GameSpec& spec, const Solution& sol, int i, int j, double x);

/// Residuals and certifying branch at a single point (x must not sit on a
/// breakpoint).
QviPoint evaluate_point(const GameSpec& spec, const Solution& sol, int i, int j,
                        double x);

/// Evaluates both Isaacs systems (max-min and min-max) on a log grid and
/// tags every point with the branch that certifies it.
QviReport verify(const GameSpec& spec, const Solution& sol, const GridSpec& grid = {});

struct FitJump {
    int i, j;
    double x;
    double value_jump;       // relative
    double derivative_jump;  // relative
};

/// Value/derivative continuity at every interior breakpoint.
std::vector<FitJump> smooth_fit_check(const Solution& sol);

/// Convenience: worst relative jump over all breakpoints (0 when none).
double worst_fit_jump(const Solution& sol);

}  // namespace switchgame

#endif
