#ifndef SWITCHGAME_CLOSEDFORM_HPP
#define SWITCHGAME_CLOSEDFORM_HPP

#include <array>
#include <optional>
#include <string>

#include "switchgame/classify.hpp"
#include "switchgame/model.hpp"
#include "switchgame/piecewise.hpp"

namespace switchgame {

enum class RegionKind { Empty, LowerClosed, UpperClosed, All };

/// Switching region of one player in one joint regime: empty, (0,t],
/// [t,inf) or (0,inf).
struct Region {
    RegionKind kind = RegionKind::Empty;
    double threshold = 0.0;

    bool contains(double x) const {
        switch (kind) {
            case RegionKind::Empty: return false;
            case RegionKind::LowerClosed: return x <= threshold;
            case RegionKind::UpperClosed: return x >= threshold;
            case RegionKind::All: return true;
        }
        return false;
    }
    std::string describe() const;
};

struct Thresholds {
    std::optional<double> x_star;
    std::optional<double> x_a;
    std::optional<double> x_b;
    std::optional<double> lambda;
};

/// Explicit solution of one covered cell: four value functions, the
/// switching regions of both players, and the free-boundary data.
struct Solution {
    OrderCase order = OrderCase::Eq;
    CostCondition costs = CostCondition::B1;
    std::array<std::array<RegimeDerived, 2>, 2> derived{};
    std::array<std::array<PiecewiseValue, 2>, 2> value;    // v[i][j]
    std::array<std::array<Region, 2>, 2> region_max{};     // player I, per (i,j)
    std::array<std::array<Region, 2>, 2> region_min{};     // player II, per (i,j)
    Thresholds thresholds;
};

/// Free-boundary data of a one-threshold cell in canonical orientation:
/// continuation below x_star carrying +coef x^m_plus on top of the lower
/// no-switch value, obstacle (higher K, minus cost) above.
struct SingleThreshold {
    double x_star;
    double coef;  // > 0
};

/// Solves the smooth-fit pair
///   (k_hi - k_lo) x*^gamma = m+ cost / (m+ - gamma)
///   coef = (k_hi - k_lo) (gamma/m+) x*^(gamma - m+)
/// Requires k_hi > k_lo, cost > 0, m_plus > 1 > gamma > 0.
SingleThreshold solve_single_threshold(double k_lo, double k_hi, double m_plus,
                                       double gamma, double cost);

/// Root of the two-threshold similarity equation in lambda = x_A/x_B:
///   m+ (g - m-) (1 - y^(m+-g)) (c12 + c21 y^m-)
///     + m- (m+ - g) (1 - y^(m--g)) (c12 + c21 y^m+) = 0
/// on (0,1); requires c12 < 0 < c21, c12 + c21 > 0.  m_plus is the root of
/// the pair carrying the x^m+ term, m_minus of the pair carrying x^m-.
/// When the 1024-point scan finds several sign changes the smallest root is
/// returned and *multiple_roots is set.  Throws "no root found" otherwise.
double solve_lambda(double m_plus, double m_minus, double gamma, double c12, double c21,
                    bool* multiple_roots = nullptr);

/// Two-threshold free-boundary data in canonical orientation (see
/// closedform.cpp for the four smooth-fit equations).  dk > 0 is the K gap,
/// cost_low < 0 < cost_high the costs at the lower/upper boundary.
struct TwoThreshold {
    double x_a;
    double x_b;
    double coef_a;  // multiplies x^m_minus on the continuation-near-infinity side
    double coef_b;  // multiplies x^m_plus on the continuation-near-zero side
    double lambda;  // x_a / x_b
};

TwoThreshold solve_two_threshold(double dk, double m_minus, double m_plus, double gamma,
                                 double cost_low, double cost_high);
/// Spec-facing wrapper: extracts the canonical parameters of the (order,
/// costs) cell from the spec.  Only valid for the four two-threshold cells.
TwoThreshold solve_two_threshold(const GameSpec& spec, OrderCase order,
                                 CostCondition costs);

/// Closed-form thresholds from the similarity reduction alone (no Newton
/// refinement); used as the cross-validation route against the full
/// smooth-fit system solve.
TwoThreshold two_threshold_similarity_route(double dk, double m_minus, double m_plus,
                                            double gamma, double cost_low,
                                            double cost_high);

/// Builds the explicit solution for the cell the spec falls into.
Solution build(const GameSpec& spec);
Solution build(const GameSpec& spec, OrderCase order, CostCondition costs);

}  // namespace switchgame

#endif
