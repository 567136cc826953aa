#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "switchgame/closedform.hpp"
#include "switchgame/qvi.hpp"
#include "support/genspec.hpp"

using namespace switchgame;
using namespace switchgame::testsupport;

namespace {

// the worked ROW_LT/B1 instance: r=1, row-1 drift 0, row-2 drift 0.05,
// unit vols, gamma 1/2, c12 = 0.2
GameSpec rowlt_example() {
    GameSpec s;
    for (int j = 0; j < 2; ++j) {
        s.drift[0][j] = 0.0;
        s.drift[1][j] = 0.05;
        s.vol[0][j] = 1.0;
        s.vol[1][j] = 1.0;
    }
    s.discount = 1.0;
    s.gamma = 0.5;
    s.c12 = 0.2;
    s.c21 = 0.3;
    s.chi12 = 0.25;
    s.chi21 = 0.35;
    s.x0 = 1.0;
    return s;
}

double lambda_equation_raw(double y, double mp, double mm, double g, double c12,
                           double c21) {
    return mp * (g - mm) * (1.0 - std::pow(y, mp - g)) * (c12 + c21 * std::pow(y, mm)) +
           mm * (mp - g) * (1.0 - std::pow(y, mm - g)) * (c12 + c21 * std::pow(y, mp));
}

}  // namespace

TEST_CASE("single-threshold smooth fit: hand-arithmetic oracle") {
    // dk = 0.1, m+ = 2, g = 1/2, cost = 0.15:
    //   x*^g = 2*0.15 / (1.5*0.1) = 2, x* = 4
    //   A = 0.1 * (0.5/2) * 4^(-1.5) = 0.025/8
    const SingleThreshold st = solve_single_threshold(0.7, 0.8, 2.0, 0.5, 0.15);
    CHECK(st.x_star == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(st.coef == doctest::Approx(0.025 / 8.0).epsilon(1e-14));

    // defining property: value and derivative of the pasted functions agree
    const double dk = 0.1, x = st.x_star;
    const double value_gap = dk * std::pow(x, 0.5) - st.coef * std::pow(x, 2.0) - 0.15;
    const double deriv_gap =
        0.5 * dk * std::pow(x, -0.5) - 2.0 * st.coef * std::pow(x, 1.0);
    CHECK(std::fabs(value_gap) < 1e-10);
    CHECK(std::fabs(deriv_gap) < 1e-10);
}

TEST_CASE("single-threshold: x* vanishes with the cost") {
    double prev = 1e300;
    for (double cost : {1.0, 1e-2, 1e-4, 1e-8}) {
        const double xs = solve_single_threshold(0.7, 0.8, 2.0, 0.5, cost).x_star;
        CHECK(xs < prev);
        prev = xs;
    }
    CHECK(prev < 1e-10);
    CHECK_THROWS_AS(solve_single_threshold(0.7, 0.8, 2.0, 0.5, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_single_threshold(0.8, 0.7, 2.0, 0.5, 0.1),
                    std::invalid_argument);
}

TEST_CASE("worked ROW_LT/B1 instance reproduces the displayed threshold pair") {
    const GameSpec s = rowlt_example();
    const double k11 = 1.0 / 1.125;          // 1/(1 + 0.125)
    const double k21 = 1.0 / 1.1;            // 1/(1 - 0.025 + 0.125)
    const double m_plus = 2.0;               // roots of m(m-1)/2 = 1 are 2, -1
    const double xs_expect =
        std::pow(m_plus * s.c12 / ((m_plus - s.gamma) * (k21 - k11)), 1.0 / s.gamma);
    const double a_expect =
        (k21 - k11) * (s.gamma / m_plus) * std::pow(xs_expect, s.gamma - m_plus);

    const Solution sol = build(s);
    REQUIRE(sol.order == OrderCase::RowLt);
    REQUIRE(sol.costs == CostCondition::B1);
    REQUIRE(sol.thresholds.x_star.has_value());
    CHECK(*sol.thresholds.x_star == doctest::Approx(xs_expect).epsilon(1e-12));
    CHECK(sol.value[0][0].pieces()[0].coef_mplus ==
          doctest::Approx(a_expect).epsilon(1e-12));
    CHECK(worst_fit_jump(sol) < 1e-10);
}

TEST_CASE("EQ/B1 keeps the no-switch values everywhere") {
    const GameSpec s = random_spec(OrderCase::Eq, CostCondition::B1, 11);
    const Solution sol = build(s);
    const double k = derive(s, 0, 0).K;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            CHECK(sol.value[i][j](2.0) == doctest::Approx(k * std::pow(2.0, s.gamma)));
            CHECK(sol.region_max[i][j].kind == RegionKind::Empty);
            CHECK(sol.region_min[i][j].kind == RegionKind::Empty);
        }
}

TEST_CASE("EQ/B4 applies the announced constant shifts") {
    const GameSpec s = random_spec(OrderCase::Eq, CostCondition::B4, 12);
    const Solution sol = build(s);
    const double x = 1.7;
    const double vhat = no_switch_value(s, 0, 0, x);
    CHECK(sol.value[0][0](x) == doctest::Approx(vhat - s.c12 + s.chi12).epsilon(1e-14));
    CHECK(sol.value[0][1](x) == doctest::Approx(vhat - s.c12).epsilon(1e-14));
    CHECK(sol.value[1][0](x) == doctest::Approx(vhat + s.chi12).epsilon(1e-14));
    CHECK(sol.value[1][1](x) == doctest::Approx(vhat).epsilon(1e-14));
}

TEST_CASE("EQ cells: zero-sum consistency of the constant shifts") {
    for (CostCondition costs : all_costs()) {
        const GameSpec s = random_spec(OrderCase::Eq, costs, 13 + (int)costs);
        const Solution sol = build(s);
        const double x = 0.9;
        double shift = 0.0;
        if (costs == CostCondition::B2 || costs == CostCondition::B4) shift += -s.c12;
        if (costs == CostCondition::B3 || costs == CostCondition::B4) shift += s.chi12;
        CHECK(sol.value[0][0](x) - sol.value[1][1](x) ==
              doctest::Approx(shift).epsilon(1e-14));
    }
}

TEST_CASE("lambda root: defining equation, bracket, and threshold order") {
    TestRng rng(99);
    for (int k = 0; k < 25; ++k) {
        const double mp = rng.uniform(1.2, 4.0);
        const double mm = rng.uniform(-4.0, -0.2);
        const double g = rng.uniform(0.15, 0.85);
        const double c12 = -rng.uniform(0.05, 0.5);
        const double c21 = -c12 + rng.uniform(0.05, 0.5);
        const double lam = solve_lambda(mp, mm, g, c12, c21);

        const double raw = lambda_equation_raw(lam, mp, mm, g, c12, c21);
        const double t1 = std::fabs(mp * (g - mm) * (1.0 - std::pow(lam, mp - g)) *
                                    (c12 + c21 * std::pow(lam, mm)));
        const double t2 = std::fabs(mm * (mp - g) * (1.0 - std::pow(lam, mm - g)) *
                                    (c12 + c21 * std::pow(lam, mp)));
        CHECK(std::fabs(raw) / (1.0 + t1 + t2) < 1e-12);

        CHECK(lam > 0.0);
        CHECK(lam < std::pow(-c21 / c12, 1.0 / mp));
        CHECK(lam < 1.0);

        const TwoThreshold tt = two_threshold_similarity_route(0.05, mm, mp, g, c12, c21);
        CHECK(tt.x_a < tt.x_b);
        CHECK(tt.x_b == doctest::Approx(tt.x_a / tt.lambda).epsilon(1e-12));
    }
    CHECK_THROWS_AS(solve_lambda(2.0, -1.0, 0.5, 0.1, 0.2), std::invalid_argument);
}

TEST_CASE("two-threshold boundaries satisfy all four smooth-fit equations") {
    TestRng rng(123);
    for (int k = 0; k < 25; ++k) {
        const double dk = rng.uniform(0.005, 0.2);
        const double mp = rng.uniform(1.2, 4.0);
        const double mm = rng.uniform(-4.0, -0.2);
        const double g = rng.uniform(0.15, 0.85);
        const double cl = -rng.uniform(0.05, 0.5);
        const double ch = -cl + rng.uniform(0.05, 0.5);
        const TwoThreshold tt = solve_two_threshold(dk, mm, mp, g, cl, ch);

        auto at = [&](double x) {
            return std::array<double, 2>{
                dk * std::pow(x, g) + tt.coef_a * std::pow(x, mm) -
                    tt.coef_b * std::pow(x, mp),
                g * dk * std::pow(x, g) + mm * tt.coef_a * std::pow(x, mm) -
                    mp * tt.coef_b * std::pow(x, mp)};
        };
        const auto ea = at(tt.x_a);
        const auto eb = at(tt.x_b);
        const double sa = std::max(1.0, dk * std::pow(tt.x_a, g));
        const double sb = std::max(1.0, dk * std::pow(tt.x_b, g));
        CHECK(std::fabs(ea[0] + cl) / sa < 1e-9);   // value match at x_a
        CHECK(std::fabs(ea[1]) / sa < 1e-9);        // derivative match at x_a
        CHECK(std::fabs(eb[0] - ch) / sb < 1e-9);   // value match at x_b
        CHECK(std::fabs(eb[1]) / sb < 1e-9);        // derivative match at x_b

        // cross-validation of the two routes
        const TwoThreshold sim = two_threshold_similarity_route(dk, mm, mp, g, cl, ch);
        CHECK(tt.x_a == doctest::Approx(sim.x_a).epsilon(1e-6));
        CHECK(tt.x_b == doctest::Approx(sim.x_b).epsilon(1e-6));
    }
    CHECK_THROWS_AS(solve_two_threshold(0.1, -1.0, 2.0, 0.5, -0.4, 0.3),
                    std::invalid_argument);
}

TEST_CASE("spec-facing two-threshold wrapper rejects one-threshold cells") {
    const GameSpec s = rowlt_example();
    CHECK_THROWS_AS(solve_two_threshold(s, OrderCase::RowLt, CostCondition::B1),
                    std::invalid_argument);
    const GameSpec s2 = random_spec(OrderCase::RowGt, CostCondition::B2, 5);
    const TwoThreshold tt = solve_two_threshold(s2, OrderCase::RowGt, CostCondition::B2);
    CHECK(tt.x_a < tt.x_b);
}

TEST_CASE("every covered cell builds a verified solution") {
    for (OrderCase order : all_orders())
        for (CostCondition costs : all_costs()) {
            CAPTURE(to_string(order));
            CAPTURE(to_string(costs));
            for (int k = 0; k < 3; ++k) {
                const GameSpec s =
                    random_spec(order, costs, 17 + 100 * (int)order + 10 * (int)costs + k);
                const Solution sol = build(s);
                const QviReport rep = verify(s, sol);
                CHECK(rep.worst_residual < 1e-8);
                CHECK(rep.violations == 0);
                CHECK(worst_fit_jump(sol) < 1e-9);

                // linear growth, with the bound assembled from the pieces
                for (double x : {1e3, 1e6}) {
                    for (int i = 0; i < 2; ++i)
                        for (int j = 0; j < 2; ++j) {
                            double c = 0.0;
                            for (const Piece& p : sol.value[i][j].pieces()) {
                                double sum = std::fabs(p.coef_gamma) +
                                             std::fabs(p.constant);
                                if (p.coef_mminus != 0.0)
                                    sum += std::fabs(p.coef_mminus) *
                                           std::pow(p.lo, p.m_minus);
                                if (p.coef_mplus != 0.0 && std::isfinite(p.hi))
                                    sum += std::fabs(p.coef_mplus) *
                                           std::pow(p.hi, p.m_plus - 1.0);
                                c = std::max(c, sum);
                            }
                            CHECK(std::fabs(sol.value[i][j](x)) <= c * (1.0 + x));
                        }
                }
            }
        }
}

TEST_CASE("declared switching regions match where the obstacles bind") {
    for (OrderCase order : all_orders())
        for (CostCondition costs : all_costs()) {
            const GameSpec s =
                random_spec(order, costs, 555 + 100 * (int)order + 10 * (int)costs);
            const Solution sol = build(s);
            const QviReport rep = verify(s, sol);
            std::vector<double> bps;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (double t : sol.value[i][j].breakpoints()) bps.push_back(t);
            auto near_boundary = [&](double x) {
                for (double t : bps)
                    if (std::fabs(x - t) < 0.1 * t) return true;
                return false;
            };
            for (size_t gi = 0; gi < rep.grid.size(); ++gi)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) {
                        const QviPoint& pt = rep.at(gi, i, j);
                        if (near_boundary(pt.x)) continue;
                        const double scale =
                            std::max(1.0, std::fabs(sol.value[i][j](pt.x)));
                        const bool binds_max = std::fabs(pt.obstacle_max) <= 1e-9 * scale;
                        const bool binds_min = std::fabs(pt.obstacle_min) <= 1e-9 * scale;
                        CAPTURE(to_string(order));
                        CAPTURE(to_string(costs));
                        CAPTURE(pt.x);
                        CHECK(sol.region_max[i][j].contains(pt.x) == binds_max);
                        CHECK(sol.region_min[i][j].contains(pt.x) == binds_min);
                    }
        }
}
