#include "switchgame/qvi.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace switchgame {

const char* to_string(QviTag t) {
    switch (t) {
        case QviTag::A1: return "A1";
        case QviTag::A2: return "A2";
        case QviTag::A3: return "A3";
        case QviTag::Violation: return "violation";
    }
    return "?";
}

double apply_generator(const GameSpec& spec, int i, int j, const PiecewiseValue& v,
                       double x) {
    if (!(x > 0.0)) throw std::invalid_argument("apply_generator: x must be positive");
    for (double t : v.breakpoints())
        if (std::fabs(x - t) < 1e-12 * std::max(1.0, t)) {
            std::ostringstream os;
            os << "apply_generator: x=" << x << " is within 1e-12 of breakpoint " << t
               << "; offset the evaluation point";
            throw std::domain_error(os.str());
        }
    const double b = spec.b(i, j), s = spec.sigma(i, j), r = spec.discount;
    const Piece& p = v.piece_at(x);
    return r * v.eval(p, x) - 0.5 * s * s * x * x * v.d2(p, x) - b * x * v.deriv1(p, x) -
           std::pow(x, spec.gamma);
}

double intervention_max(const GameSpec& spec, const Solution& sol, int i, int j,
                        double x) {
    const int k = 1 - i;
    return sol.value[k][j](x) - spec.cost_max(i, k);
}

double intervention_min(const GameSpec& spec, const Solution& sol, int i, int j,
                        double x) {
    const int l = 1 - j;
    return sol.value[i][l](x) + spec.cost_min(j, l);
}

namespace {

std::vector<double> all_breakpoints(const Solution& sol) {
    std::set<double> bps;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (double t : sol.value[i][j].breakpoints()) bps.insert(t);
    return {bps.begin(), bps.end()};
}

}  // namespace

QviReport verify(const GameSpec& spec, const Solution& sol, const GridSpec& grid) {
    QviReport rep;
    const std::vector<double> bps = all_breakpoints(sol);

    double lo = grid.lo, hi = grid.hi;
    if (lo <= 0.0 || hi <= 0.0) {
        if (bps.empty()) {
            lo = 0.01;
            hi = 100.0;
        } else {
            lo = bps.front() / 10.0;
            hi = bps.back() * 10.0;
        }
    }
    const int n = std::max(grid.points, 2);
    rep.grid.reserve(n);
    const double step = std::log(hi / lo) / (n - 1);
    for (int k = 0; k < n; ++k) {
        double x = lo * std::exp(step * k);
        for (double t : bps) {
            const double off = grid.breakpoint_offset * std::max(1.0, t);
            if (std::fabs(x - t) < off) x = (x >= t) ? t + off : t - off;
        }
        rep.grid.push_back(x);
    }

    rep.points.reserve(4 * rep.grid.size());
    for (double x : rep.grid) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const QviPoint pt = evaluate_point(spec, sol, i, j, x);
                const double scale =
                    std::max({1.0, std::fabs(sol.value[i][j](x)),
                              std::pow(x, spec.gamma)});
                // both Isaacs systems must vanish
                const double maxmin =
                    std::max(std::min(pt.generator_residual, pt.obstacle_max),
                             pt.obstacle_min);
                const double minmax =
                    std::min(std::max(pt.generator_residual, pt.obstacle_min),
                             pt.obstacle_max);
                const double res =
                    std::max(std::fabs(maxmin), std::fabs(minmax)) / scale;
                rep.worst_residual = std::max(rep.worst_residual, res);
                if (pt.tag == QviTag::Violation) ++rep.violations;
                rep.points.push_back(pt);
            }
    }
    return rep;
}

QviPoint evaluate_point(const GameSpec& spec, const Solution& sol, int i, int j,
                        double x) {
    QviPoint pt{};
    pt.x = x;
    pt.i = i;
    pt.j = j;
    const double v = sol.value[i][j](x);
    pt.generator_residual = apply_generator(spec, i, j, sol.value[i][j], x);
    pt.obstacle_max = v - intervention_max(spec, sol, i, j, x);
    pt.obstacle_min = v - intervention_min(spec, sol, i, j, x);

    const double scale = std::max({1.0, std::fabs(v), std::pow(x, spec.gamma)});
    const double tol = kQviTol * scale;
    const double G = pt.generator_residual;
    const double vM = pt.obstacle_max;
    const double vN = pt.obstacle_min;
    if (std::fabs(G) <= tol && vM >= -tol && vN <= tol)
        pt.tag = QviTag::A1;
    else if (G >= -tol && std::fabs(vM) <= tol && vN <= tol)
        pt.tag = QviTag::A2;
    else if (std::fabs(vN) <= tol && std::min(G, vM) <= tol)
        pt.tag = QviTag::A3;
    else
        pt.tag = QviTag::Violation;
    return pt;
}

std::vector<FitJump> smooth_fit_check(const Solution& sol) {
    std::vector<FitJump> jumps;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const PiecewiseValue& v = sol.value[i][j];
            const auto& pieces = v.pieces();
            for (size_t k = 0; k + 1 < pieces.size(); ++k) {
                const double t = pieces[k].hi;
                const double vl = v.eval(pieces[k], t), vr = v.eval(pieces[k + 1], t);
                const double dl = v.deriv1(pieces[k], t), dr = v.deriv1(pieces[k + 1], t);
                FitJump fj;
                fj.i = i;
                fj.j = j;
                fj.x = t;
                fj.value_jump =
                    std::fabs(vl - vr) / std::max({1.0, std::fabs(vl), std::fabs(vr)});
                // relative to the local slope, so detector sensitivity does
                // not fade with the threshold scale
                fj.derivative_jump = std::fabs(dl - dr) /
                                     std::max({1e-12, std::fabs(dl), std::fabs(dr)});
                jumps.push_back(fj);
            }
        }
    return jumps;
}

double worst_fit_jump(const Solution& sol) {
    double worst = 0.0;
    for (const FitJump& fj : smooth_fit_check(sol))
        worst = std::max({worst, fj.value_jump, fj.derivative_jump});
    return worst;
}

}  // namespace switchgame
