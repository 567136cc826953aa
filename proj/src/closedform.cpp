#include "switchgame/closedform.hpp"

#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "switchgame/rootfind.hpp"

namespace switchgame {

std::string Region::describe() const {
    std::ostringstream os;
    switch (kind) {
        case RegionKind::Empty: os << "empty"; break;
        case RegionKind::LowerClosed: os << "(0, " << threshold << "]"; break;
        case RegionKind::UpperClosed: os << "[" << threshold << ", inf)"; break;
        case RegionKind::All: os << "(0, inf)"; break;
    }
    return os.str();
}

SingleThreshold solve_single_threshold(double k_lo, double k_hi, double m_plus,
                                       double gamma, double cost) {
    if (!(cost > 0.0)) throw std::invalid_argument("solve_single_threshold: cost <= 0");
    if (!(k_hi > k_lo)) throw std::invalid_argument("solve_single_threshold: k_hi <= k_lo");
    if (!(m_plus > 1.0 && gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("solve_single_threshold: need m_plus > 1 > gamma > 0");
    const double dk = k_hi - k_lo;
    const double x_star = std::pow(m_plus * cost / ((m_plus - gamma) * dk), 1.0 / gamma);
    const double coef = dk * (gamma / m_plus) * std::pow(x_star, gamma - m_plus);
    return SingleThreshold{x_star, coef};
}

namespace {

// Similarity equation for the two-threshold boundaries, in y = x_A/x_B.
// Normalized by the term magnitudes so the residual at the root is a
// relative quantity.
double lambda_equation(double y, double mp, double mm, double g, double c12, double c21) {
    const double t1 = mp * (g - mm) * (1.0 - std::pow(y, mp - g)) * (c12 + c21 * std::pow(y, mm));
    const double t2 = mm * (mp - g) * (1.0 - std::pow(y, mm - g)) * (c12 + c21 * std::pow(y, mp));
    return (t1 + t2) / (1.0 + std::fabs(t1) + std::fabs(t2));
}

}  // namespace

double solve_lambda(double m_plus, double m_minus, double gamma, double c12, double c21,
                    bool* multiple_roots) {
    if (!(c12 < 0.0 && c21 > 0.0 && c12 + c21 > 0.0))
        throw std::invalid_argument("solve_lambda: need c12 < 0 < c21 with c12 + c21 > 0");
    if (multiple_roots) *multiple_roots = false;
    auto g = [&](double y) { return lambda_equation(y, m_plus, m_minus, gamma, c12, c21); };
    // the usable root (x_A < x_B, positive boundary value) lies in
    // (0, (-c12/c21)^(1/m+)) which sits inside (0,1); endpoints shrunk to
    // dodge the singular limits
    const double lo = 1e-9, hi = 1.0 - 1e-9;
    auto brackets = scan_sign_changes(g, lo, hi, 1024);
    if (brackets.empty())
        throw std::runtime_error(
            "solve_lambda: no root found (no sign change on the 1024-point scan of (0,1))");
    if (brackets.size() > 1) {
        if (multiple_roots) *multiple_roots = true;
        std::cerr << "solve_lambda: warning: " << brackets.size()
                  << " sign changes in the bracket; taking the smallest root\n";
    }
    // bisect to full double resolution, keeping the smallest residual seen
    double a = brackets.front().first, b = brackets.front().second;
    double fa = g(a);
    double best = a, fbest = std::fabs(fa);
    if (std::fabs(g(b)) < fbest) {
        best = b;
        fbest = std::fabs(g(b));
    }
    while (true) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        const double fm = g(m);
        if (std::fabs(fm) < fbest) {
            best = m;
            fbest = std::fabs(fm);
        }
        if (fm == 0.0) break;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return best;
}

TwoThreshold two_threshold_similarity_route(double dk, double mm, double mp, double g,
                                            double cl, double ch) {
    const double lam = solve_lambda(mp, mm, g, cl, ch);
    // ratio of the boundary values along the similarity reduction:
    //   dk * x_B^gamma = m- (cl + ch lam^m+) / ((m- - g)(lam^m+ - lam^g))
    const double t = mm * (cl + ch * std::pow(lam, mp)) /
                     ((mm - g) * (std::pow(lam, mp) - std::pow(lam, g)));
    if (!(t > 0.0))
        throw std::runtime_error("two_threshold_similarity_route: nonpositive boundary value");
    const double x_b = std::pow(t / dk, 1.0 / g);
    const double x_a = lam * x_b;
    const double pb = (-(mp - g) * t + mp * ch) / (mp - mm);
    const double qb = (-(mm - g) * t + mm * ch) / (mp - mm);
    return TwoThreshold{x_a, x_b, pb * std::pow(x_b, -mm), qb * std::pow(x_b, -mp), lam};
}

TwoThreshold solve_two_threshold(double dk, double mm, double mp, double g, double cl,
                                 double ch) {
    if (!(dk > 0.0)) throw std::invalid_argument("solve_two_threshold: dk <= 0");
    if (!(cl < 0.0 && ch > 0.0 && cl + ch > 0.0))
        throw std::invalid_argument("solve_two_threshold: need cost_low < 0 < cost_high, sum > 0");

    TwoThreshold guess = two_threshold_similarity_route(dk, mm, mp, g, cl, ch);

    // Decisive route: solve the four smooth-fit equations directly.  Given
    // (x_A, x_B) the two value-matching equations are linear in (A, B); the
    // two derivative-matching equations are the residuals of a Newton
    // iteration in (log x_A, log x_B).
    double coef_a = guess.coef_a, coef_b = guess.coef_b;
    auto solve_ab = [&](double xa, double xb, double& A, double& B) {
        const double am = std::pow(xa, mm), ap = std::pow(xa, mp);
        const double bm = std::pow(xb, mm), bp = std::pow(xb, mp);
        const double r1 = -dk * std::pow(xa, g) - cl;
        const double r2 = dk * std::pow(xb, g) - ch;
        const double det = am * bp - ap * bm;
        A = (bp * r1 + ap * r2) / det;
        B = (bm * r1 + am * r2) / det;
    };
    auto residuals = [&](const double* u, double* r) {
        const double xa = std::exp(u[0]), xb = std::exp(u[1]);
        if (!(xa > 0.0 && xb > xa)) {
            r[0] = r[1] = 1e30;
            return;
        }
        double A, B;
        solve_ab(xa, xb, A, B);
        const double sa = std::max(1.0, g * dk * std::pow(xa, g));
        const double sb = std::max(1.0, g * dk * std::pow(xb, g));
        r[0] = (g * dk * std::pow(xa, g) + mm * A * std::pow(xa, mm) -
                mp * B * std::pow(xa, mp)) /
               sa;
        r[1] = (-g * dk * std::pow(xb, g) + mp * B * std::pow(xb, mp) -
                mm * A * std::pow(xb, mm)) /
               sb;
    };
    double u[2] = {std::log(guess.x_a), std::log(guess.x_b)};
    if (!newton2d(residuals, u, 1e-12)) {
        std::ostringstream os;
        os << "solve_two_threshold: smooth-fit system did not converge from the "
              "similarity initial guess (x_a="
           << guess.x_a << ", x_b=" << guess.x_b << ")";
        throw std::runtime_error(os.str());
    }
    const double xa = std::exp(u[0]), xb = std::exp(u[1]);
    solve_ab(xa, xb, coef_a, coef_b);
    return TwoThreshold{xa, xb, coef_a, coef_b, xa / xb};
}

namespace {

struct CellParams {
    double dk, mm, mp, cl, ch;
};

CellParams two_threshold_params(const GameSpec& spec,
                                const std::array<std::array<RegimeDerived, 2>, 2>& d,
                                OrderCase order, CostCondition costs) {
    if (order == OrderCase::RowGt &&
        (costs == CostCondition::B2 || costs == CostCondition::B4))
        return {d[0][0].K - d[1][0].K, d[0][0].m_minus, d[1][0].m_plus, spec.c12, spec.c21};
    if (order == OrderCase::ColLt &&
        (costs == CostCondition::B3 || costs == CostCondition::B4))
        return {d[0][1].K - d[0][0].K, d[0][0].m_minus, d[0][1].m_plus, spec.chi12,
                spec.chi21};
    throw std::invalid_argument("solve_two_threshold: not a two-threshold cell");
}

Piece pc(double lo, double hi, double k, double constant = 0.0) {
    Piece p;
    p.lo = lo;
    p.hi = hi;
    p.coef_gamma = k;
    p.constant = constant;
    return p;
}

const double kInf = std::numeric_limits<double>::infinity();

PiecewiseValue flat(double gamma, double k, double constant = 0.0) {
    return PiecewiseValue(gamma, {pc(0.0, kInf, k, constant)});
}

void add_constant(PiecewiseValue& v, double c) {
    std::vector<Piece> ps = v.pieces();
    for (Piece& p : ps) p.constant += c;
    v = PiecewiseValue(v.gamma(), std::move(ps));
}

Region lower(double t) { return Region{RegionKind::LowerClosed, t}; }
Region upper(double t) { return Region{RegionKind::UpperClosed, t}; }
Region all() { return Region{RegionKind::All, 0.0}; }

}  // namespace

TwoThreshold solve_two_threshold(const GameSpec& spec, OrderCase order,
                                 CostCondition costs) {
    std::array<std::array<RegimeDerived, 2>, 2> d;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) d[i][j] = derive(spec, i, j);
    const CellParams p = two_threshold_params(spec, d, order, costs);
    return solve_two_threshold(p.dk, p.mm, p.mp, spec.gamma, p.cl, p.ch);
}

Solution build(const GameSpec& spec) {
    const ValidationReport report = validate(spec);
    if (!report.empty()) {
        std::string msg = "build: invalid spec:";
        for (const auto& r : report) msg += " [" + r + "]";
        throw std::invalid_argument(msg);
    }
    const Classification c = classify(spec);
    return build(spec, c.order, c.costs);
}

Solution build(const GameSpec& spec, OrderCase order, CostCondition costs) {
    Solution sol;
    sol.order = order;
    sol.costs = costs;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) sol.derived[i][j] = derive(spec, i, j);
    const auto& d = sol.derived;
    const double g = spec.gamma;
    const double c12 = spec.c12, c21 = spec.c21, chi12 = spec.chi12, chi21 = spec.chi21;
    const double K[2][2] = {{d[0][0].K, d[0][1].K}, {d[1][0].K, d[1][1].K}};

    switch (order) {
        case OrderCase::Eq: {
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) sol.value[i][j] = flat(g, K[i][j]);
            if (costs == CostCondition::B2 || costs == CostCondition::B4) {
                add_constant(sol.value[0][0], -c12);
                add_constant(sol.value[0][1], -c12);
                sol.region_max[0][0] = sol.region_max[0][1] = all();
            }
            if (costs == CostCondition::B3 || costs == CostCondition::B4) {
                add_constant(sol.value[0][0], chi12);
                add_constant(sol.value[1][0], chi12);
                sol.region_min[0][0] = sol.region_min[1][0] = all();
            }
            break;
        }

        case OrderCase::RowLt: {
            if (costs == CostCondition::B1 || costs == CostCondition::B3) {
                const SingleThreshold st =
                    solve_single_threshold(K[0][0], K[1][0], d[0][0].m_plus, g, c12);
                sol.thresholds.x_star = st.x_star;
                for (int j = 0; j < 2; ++j) {
                    Piece below = pc(0.0, st.x_star, K[0][j]);
                    below.coef_mplus = st.coef;
                    below.m_plus = d[0][j].m_plus;
                    Piece above = pc(st.x_star, kInf, K[1][j], -c12);
                    sol.value[0][j] = PiecewiseValue(g, {below, above});
                    sol.value[1][j] = flat(g, K[1][j]);
                    sol.region_max[0][j] = upper(st.x_star);
                }
            } else {
                for (int j = 0; j < 2; ++j) {
                    sol.value[0][j] = flat(g, K[1][j], -c12);
                    sol.value[1][j] = flat(g, K[1][j]);
                    sol.region_max[0][j] = all();
                }
            }
            if (costs == CostCondition::B3 || costs == CostCondition::B4) {
                add_constant(sol.value[0][0], chi12);
                add_constant(sol.value[1][0], chi12);
                sol.region_min[0][0] = sol.region_min[1][0] = all();
            }
            break;
        }

        case OrderCase::RowGt: {
            if (costs == CostCondition::B1 || costs == CostCondition::B3) {
                const SingleThreshold st =
                    solve_single_threshold(K[1][0], K[0][0], d[1][0].m_plus, g, c21);
                sol.thresholds.x_star = st.x_star;
                for (int j = 0; j < 2; ++j) {
                    sol.value[0][j] = flat(g, K[0][j]);
                    Piece below = pc(0.0, st.x_star, K[1][j]);
                    below.coef_mplus = st.coef;
                    below.m_plus = d[1][j].m_plus;
                    Piece above = pc(st.x_star, kInf, K[0][j], -c21);
                    sol.value[1][j] = PiecewiseValue(g, {below, above});
                    sol.region_max[1][j] = upper(st.x_star);
                }
            } else {
                const TwoThreshold tt = solve_two_threshold(
                    K[0][0] - K[1][0], d[0][0].m_minus, d[1][0].m_plus, g, c12, c21);
                sol.thresholds.x_a = tt.x_a;
                sol.thresholds.x_b = tt.x_b;
                sol.thresholds.lambda = tt.lambda;
                for (int j = 0; j < 2; ++j) {
                    Piece p0 = pc(0.0, tt.x_a, K[1][j], -c12);
                    p0.coef_mplus = tt.coef_b;
                    p0.m_plus = d[1][j].m_plus;
                    Piece p1 = pc(tt.x_a, kInf, K[0][j]);
                    p1.coef_mminus = tt.coef_a;
                    p1.m_minus = d[0][j].m_minus;
                    sol.value[0][j] = PiecewiseValue(g, {p0, p1});

                    Piece q0 = pc(0.0, tt.x_b, K[1][j]);
                    q0.coef_mplus = tt.coef_b;
                    q0.m_plus = d[1][j].m_plus;
                    Piece q1 = pc(tt.x_b, kInf, K[0][j], -c21);
                    q1.coef_mminus = tt.coef_a;
                    q1.m_minus = d[0][j].m_minus;
                    sol.value[1][j] = PiecewiseValue(g, {q0, q1});

                    sol.region_max[0][j] = lower(tt.x_a);
                    sol.region_max[1][j] = upper(tt.x_b);
                }
            }
            if (costs == CostCondition::B3 || costs == CostCondition::B4) {
                add_constant(sol.value[0][0], chi12);
                add_constant(sol.value[1][0], chi12);
                sol.region_min[0][0] = sol.region_min[1][0] = all();
            }
            break;
        }

        case OrderCase::ColLt: {
            if (costs == CostCondition::B1 || costs == CostCondition::B2) {
                const SingleThreshold st =
                    solve_single_threshold(K[0][0], K[0][1], d[0][1].m_plus, g, chi21);
                sol.thresholds.x_star = st.x_star;
                for (int i = 0; i < 2; ++i) {
                    sol.value[i][0] = flat(g, K[i][0]);
                    Piece below = pc(0.0, st.x_star, K[i][1]);
                    below.coef_mplus = -st.coef;
                    below.m_plus = d[i][1].m_plus;
                    Piece above = pc(st.x_star, kInf, K[i][0], chi21);
                    sol.value[i][1] = PiecewiseValue(g, {below, above});
                    sol.region_min[i][1] = upper(st.x_star);
                }
            } else {
                const TwoThreshold tt = solve_two_threshold(
                    K[0][1] - K[0][0], d[0][0].m_minus, d[0][1].m_plus, g, chi12, chi21);
                sol.thresholds.x_a = tt.x_a;
                sol.thresholds.x_b = tt.x_b;
                sol.thresholds.lambda = tt.lambda;
                for (int i = 0; i < 2; ++i) {
                    Piece p0 = pc(0.0, tt.x_a, K[i][1], chi12);
                    p0.coef_mplus = -tt.coef_b;
                    p0.m_plus = d[i][1].m_plus;
                    Piece p1 = pc(tt.x_a, kInf, K[i][0]);
                    p1.coef_mminus = -tt.coef_a;
                    p1.m_minus = d[i][0].m_minus;
                    sol.value[i][0] = PiecewiseValue(g, {p0, p1});

                    Piece q0 = pc(0.0, tt.x_b, K[i][1]);
                    q0.coef_mplus = -tt.coef_b;
                    q0.m_plus = d[i][1].m_plus;
                    Piece q1 = pc(tt.x_b, kInf, K[i][0], chi21);
                    q1.coef_mminus = -tt.coef_a;
                    q1.m_minus = d[i][0].m_minus;
                    sol.value[i][1] = PiecewiseValue(g, {q0, q1});

                    sol.region_min[i][0] = lower(tt.x_a);
                    sol.region_min[i][1] = upper(tt.x_b);
                }
            }
            // player I leaves row 1 immediately in B2/B4; with K paired by
            // column this is a constant shift of the row-1 values
            if (costs == CostCondition::B2 || costs == CostCondition::B4) {
                add_constant(sol.value[0][0], -c12);
                add_constant(sol.value[0][1], -c12);
                sol.region_max[0][0] = sol.region_max[0][1] = all();
            }
            break;
        }

        case OrderCase::ColGt: {
            if (costs == CostCondition::B1 || costs == CostCondition::B2) {
                const SingleThreshold st =
                    solve_single_threshold(K[0][1], K[0][0], d[0][0].m_plus, g, chi12);
                sol.thresholds.x_star = st.x_star;
                for (int i = 0; i < 2; ++i) {
                    Piece below = pc(0.0, st.x_star, K[i][0]);
                    below.coef_mplus = -st.coef;
                    below.m_plus = d[i][0].m_plus;
                    Piece above = pc(st.x_star, kInf, K[i][1], chi12);
                    sol.value[i][0] = PiecewiseValue(g, {below, above});
                    sol.value[i][1] = flat(g, K[i][1]);
                    sol.region_min[i][0] = upper(st.x_star);
                }
                if (costs == CostCondition::B2) {
                    add_constant(sol.value[0][0], -c12);
                    add_constant(sol.value[0][1], -c12);
                    sol.region_max[0][0] = sol.region_max[0][1] = all();
                }
            } else if (costs == CostCondition::B3) {
                sol.value[0][0] = flat(g, K[0][1], chi12);
                sol.value[0][1] = flat(g, K[0][1]);
                sol.value[1][0] = flat(g, K[1][1], chi12);
                sol.value[1][1] = flat(g, K[1][1]);
                sol.region_min[0][0] = sol.region_min[1][0] = all();
            } else {
                sol.value[0][0] = flat(g, K[1][1], chi12 - c12);
                sol.value[0][1] = flat(g, K[0][1], -c12);
                sol.value[1][0] = flat(g, K[1][1], chi12);
                sol.value[1][1] = flat(g, K[1][1]);
                sol.region_max[0][0] = sol.region_max[0][1] = all();
                sol.region_min[0][0] = sol.region_min[1][0] = all();
            }
            break;
        }
    }
    return sol;
}

}  // namespace switchgame
