#ifndef SWITCHGAME_ROOTFIND_HPP
#define SWITCHGAME_ROOTFIND_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace switchgame {

/// Bracketed root refinement: bisection with secant acceleration, absolute
/// tolerance on the independent variable.  f(a) and f(b) must have opposite
/// signs (zero endpoints accepted).
template <typename F>
double find_root(F&& f, double a, double b, double xtol = 1e-13, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw std::runtime_error("find_root: no sign change in bracket [" +
                                 std::to_string(a) + ", " + std::to_string(b) + "]");
    for (int it = 0; it < max_iter && b - a > xtol; ++it) {
        // secant proposal, clipped into the bracket interior
        double m = 0.5 * (a + b);
        double s = (fb != fa) ? (a - fa * (b - a) / (fb - fa)) : m;
        double x = (s > a + 0.1 * xtol && s < b - 0.1 * xtol) ? s : m;
        double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx > 0.0) == (fa > 0.0)) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    return 0.5 * (a + b);
}

/// Scans [lo, hi] with `n` log-spaced points and returns the left edges of
/// every interval with a sign change.
template <typename F>
std::vector<std::pair<double, double>> scan_sign_changes(F&& f, double lo, double hi,
                                                         int n = 1024) {
    std::vector<std::pair<double, double>> brackets;
    const double ratio = std::pow(hi / lo, 1.0 / (n - 1));
    double xa = lo, fa = f(xa);
    for (int k = 1; k < n; ++k) {
        double xb = (k == n - 1) ? hi : lo * std::pow(ratio, k);
        double fb = f(xb);
        if (fa == 0.0 || (fa > 0.0) != (fb > 0.0)) brackets.emplace_back(xa, xb);
        xa = xb;
        fa = fb;
    }
    return brackets;
}

/// Damped Newton iteration for a 2-dimensional root problem with a
/// finite-difference Jacobian.  Works on whatever coordinates the caller
/// supplies (the solvers use log-coordinates).
inline bool newton2d(const std::function<void(const double*, double*)>& f, double* x,
                     double ftol, int max_iter = 60) {
    double r[2];
    f(x, r);
    for (int it = 0; it < max_iter; ++it) {
        double n0 = std::fabs(r[0]) + std::fabs(r[1]);
        if (n0 < ftol) return true;
        double J[2][2];
        for (int c = 0; c < 2; ++c) {
            const double h = 1e-7 * std::max(1.0, std::fabs(x[c]));
            double xp[2] = {x[0], x[1]};
            xp[c] += h;
            double rp[2];
            f(xp, rp);
            J[0][c] = (rp[0] - r[0]) / h;
            J[1][c] = (rp[1] - r[1]) / h;
        }
        const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        if (det == 0.0 || !std::isfinite(det)) return false;
        double dx0 = (-r[0] * J[1][1] + r[1] * J[0][1]) / det;
        double dx1 = (-r[1] * J[0][0] + r[0] * J[1][0]) / det;
        double step = 1.0;
        for (int ls = 0; ls < 30; ++ls) {
            double xn[2] = {x[0] + step * dx0, x[1] + step * dx1};
            double rn[2];
            f(xn, rn);
            if (std::isfinite(rn[0]) && std::isfinite(rn[1]) &&
                std::fabs(rn[0]) + std::fabs(rn[1]) < n0) {
                x[0] = xn[0];
                x[1] = xn[1];
                r[0] = rn[0];
                r[1] = rn[1];
                break;
            }
            step *= 0.5;
            if (ls == 29) return std::fabs(r[0]) + std::fabs(r[1]) < ftol;
        }
    }
    return std::fabs(r[0]) + std::fabs(r[1]) < ftol;
}

/// Pairwise (cascade) summation; bounds accumulated floating error.
inline double pairwise_sum(const double* v, size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (size_t k = 0; k < n; ++k) s += v[k];
        return s;
    }
    const size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}
inline double pairwise_sum(const std::vector<double>& v) {
    return v.empty() ? 0.0 : pairwise_sum(v.data(), v.size());
}

}  // namespace switchgame

#endif
