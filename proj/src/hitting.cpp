#include "switchgame/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace switchgame {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

bool never_barrier(double a) { return a == 0.0 || std::isinf(a); }

struct Ctx {
    const GameSpec& spec;
    RegimeDerived d[2][2];
    bool single;

    Ctx(const GameSpec& s, bool single_diffusion) : spec(s), single(single_diffusion) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) d[i][j] = derive(s, i, j);
    }
    const RegimeDerived& at(int i, int j) const { return single ? d[0][0] : d[i][j]; }

    double vhat(int i, int j, double x) const {
        return at(i, j).K * std::pow(x, spec.gamma);
    }
    double r1(int i, int j, double x, double a) const {
        if (never_barrier(a)) return 0.0;
        if (a == x) return 1.0;
        const RegimeDerived& rd = at(i, j);
        return std::pow(x / a, a > x ? rd.m_plus : rd.m_minus);
    }
    // discount at hitting a before b, x between the barriers
    double r3(int i, int j, double x, double a, double b) const {
        if (never_barrier(a)) return 0.0;
        if (never_barrier(b)) return r1(i, j, x, a);
        if (x == a) return 1.0;
        if (x == b) return 0.0;
        if (!((a < x && x < b) || (b < x && x < a)))
            throw std::invalid_argument("laplace_exit: x must lie between the barriers");
        const RegimeDerived& rd = at(i, j);
        const double num = std::pow(x / b, rd.m_plus) - std::pow(x / b, rd.m_minus);
        const double den = std::pow(a / b, rd.m_plus) - std::pow(a / b, rd.m_minus);
        return num / den;
    }
    double f1(int i, int j, double x, double a) const {
        if (never_barrier(a)) return vhat(i, j, x);
        return vhat(i, j, x) - r1(i, j, x, a) * vhat(i, j, a);
    }
    double f3(int i, int j, double x, double a, double b) const {
        if (never_barrier(a)) return f1(i, j, x, b);
        if (never_barrier(b)) return f1(i, j, x, a);
        return vhat(i, j, x) - r3(i, j, x, a, b) * vhat(i, j, a) -
               r3(i, j, x, b, a) * vhat(i, j, b);
    }
};

void check_positive(double x, const char* what) {
    if (!(x > 0.0)) throw std::invalid_argument(std::string(what) + ": x must be positive");
}

}  // namespace

double laplace_hit(const GameSpec& spec, int i, int j, double x, double a) {
    check_positive(x, "laplace_hit");
    return Ctx(spec, false).r1(i, j, x, a);
}

double laplace_two_stage(const GameSpec& spec, int i, int j, double x, double a,
                         double b) {
    check_positive(x, "laplace_two_stage");
    Ctx c(spec, false);
    return c.r1(i, j, x, a) * c.r1(i, j, a, b);
}

double laplace_exit(const GameSpec& spec, int i, int j, double x, double a, double b) {
    check_positive(x, "laplace_exit");
    return Ctx(spec, false).r3(i, j, x, a, b);
}

double profit_until(const GameSpec& spec, int i, int j, double x, double a) {
    check_positive(x, "profit_until");
    return Ctx(spec, false).f1(i, j, x, a);
}

double profit_between(const GameSpec& spec, int i, int j, double x, double a, double b) {
    check_positive(x, "profit_between");
    Ctx c(spec, false);
    if (never_barrier(a)) return 0.0;  // the first stage never completes
    return c.r1(i, j, x, a) * c.f1(i, j, a, b);
}

double profit_until_exit(const GameSpec& spec, int i, int j, double x, double a,
                         double b) {
    check_positive(x, "profit_until_exit");
    return Ctx(spec, false).f3(i, j, x, a, b);
}

namespace {

void validate_tuple(const RegionTuple& t) {
    if (!(t.y21 >= 0.0) || std::isinf(t.y21))
        throw std::invalid_argument("j_values: y21 must be finite and >= 0");
    // x12 = 0 means player I leaves regime 1 immediately (needs y21 = 0,
    // otherwise he would bounce at one instant)
    if (t.x12 == 0.0) {
        if (t.y21 != 0.0)
            throw std::invalid_argument("j_values: x12 = 0 requires y21 = 0");
        return;
    }
    if (!(t.x12 > t.y21))
        throw std::invalid_argument("j_values: need y21 < x12");
    const bool prime_sentinel = t.x12_prime == 0.0 || std::isinf(t.x12_prime);
    if (!prime_sentinel && !(t.y21 < t.x12_prime && t.x12_prime < t.x12))
        throw std::invalid_argument("j_values: need y21 < x12' < x12 (or sentinel x12')");
}

// Player I's renewal cycle in column j: switch 1 -> 2 at x12 (cost c12),
// switch back at y21 (cost c21).  Solves the two boundary unknowns and
// evaluates both values at any state.
struct ColumnBounce {
    const Ctx& ctx;
    int j;
    double y21, x12, c12, c21;
    double at_x12 = 0.0;  // value in (2,j) at x12
    double at_y21 = 0.0;  // value in (1,j) at y21

    ColumnBounce(const Ctx& c, int col, double y, double x, double cost12, double cost21)
        : ctx(c), j(col), y21(y), x12(x), c12(cost12), c21(cost21) {
        if (!std::isinf(x12)) {
            // renewal fixed point at x12: down-leg in (2,j), up-leg in (1,j)
            const double r_down = ctx.r1(1, j, x12, y21);  // 0 when y21 = 0
            const double f_down = ctx.f1(1, j, x12, y21);
            const double r_up = y21 > 0.0 ? ctx.r1(0, j, y21, x12) : 0.0;
            const double f_up = y21 > 0.0 ? ctx.f1(0, j, y21, x12) : 0.0;
            const double r2 = r_down * r_up;
            if (!(1.0 - r2 > 0.0))
                throw std::runtime_error("j_values: renewal denominator 1 - R2 <= 0");
            at_x12 = (f_down - r_down * c21 + r_down * f_up - r2 * c12) / (1.0 - r2);
        }
        if (y21 > 0.0)
            at_y21 = std::isinf(x12)
                         ? ctx.f1(0, j, y21, x12)
                         : ctx.f1(0, j, y21, x12) + ctx.r1(0, j, y21, x12) * (at_x12 - c12);
    }

    double lower(double x) const {  // value in (1,j), continuation below x12
        if (std::isinf(x12)) return ctx.vhat(0, j, x);
        return ctx.f1(0, j, x, x12) + ctx.r1(0, j, x, x12) * (at_x12 - c12);
    }
    double upper(double x) const {  // value in (2,j), continuation above y21
        if (y21 == 0.0) return ctx.vhat(1, j, x);
        return ctx.f1(1, j, x, y21) + ctx.r1(1, j, x, y21) * (at_y21 - c21);
    }
    double value1(double x) const { return x >= x12 ? -c12 + upper(x) : lower(x); }
    double value2(double x) const { return x <= y21 ? -c21 + lower(x) : upper(x); }
};

}  // namespace

JValues j_values(const GameSpec& spec, double x, const RegionTuple& t,
                 const HittingOptions& opts) {
    check_positive(x, "j_values");
    validate_tuple(t);
    Ctx ctx(spec, opts.single_diffusion);
    const double c12 = spec.c12, c21 = spec.c21, chi12 = spec.chi12;

    JValues out{};
    if (t.x12 == 0.0) {
        // player I leaves regime 1 at once and never returns; the game then
        // lives in row 2 with player II's one-shot switch at x12'
        out.j[1][1] = ctx.vhat(1, 1, x);
        out.j[0][1] = -c12 + out.j[1][1];
        const double xp = t.x12_prime;
        if (std::isinf(xp))
            out.j[1][0] = ctx.vhat(1, 0, x);
        else if (x >= xp)
            out.j[1][0] = chi12 + ctx.vhat(1, 1, x);
        else
            out.j[1][0] = ctx.f1(1, 0, x, xp) +
                          ctx.r1(1, 0, x, xp) * (chi12 + ctx.vhat(1, 1, xp));
        out.j[0][0] = -c12 + out.j[1][0];
        return out;
    }
    if (std::isinf(t.x12_prime)) {
        // player II never moves: independent renewal problems per column
        for (int j = 0; j < 2; ++j) {
            ColumnBounce cb(ctx, j, t.y21, t.x12, c12, c21);
            out.j[0][j] = cb.value1(x);
            out.j[1][j] = cb.value2(x);
        }
        return out;
    }

    // after player II's one-shot 1 -> 2 switch the game lives in column 2
    ColumnBounce post(ctx, 1, t.y21, t.x12, c12, c21);
    out.j[0][1] = post.value1(x);
    out.j[1][1] = post.value2(x);

    const double xp = t.x12_prime;
    auto j11 = [&](double y) {
        if (y >= xp) return chi12 + post.value1(y);
        return ctx.f1(0, 0, y, xp) + ctx.r1(0, 0, y, xp) * (chi12 + post.value1(xp));
    };
    out.j[0][0] = j11(x);

    if (t.y21 > 0.0 && x <= t.y21) {
        out.j[1][0] = -c21 + j11(x);
    } else if (x >= xp) {
        out.j[1][0] = chi12 + post.value2(x);
    } else {
        // two-sided leg in (2,1): player I takes over at y21, player II at x12'
        const double to_y = ctx.r3(1, 0, x, t.y21, xp);
        const double to_p = ctx.r3(1, 0, x, xp, t.y21);
        const double run = ctx.f3(1, 0, x, t.y21, xp);
        const double at_y = t.y21 > 0.0 ? -c21 + j11(t.y21) : 0.0;
        out.j[1][0] = run + to_y * at_y + to_p * (chi12 + post.value2(xp));
    }
    return out;
}

ThresholdStrategy strategy_from_tuple(const RegionTuple& t) {
    auto above = [](double v) {
        if (v == 0.0) return Rule{RuleKind::Always, 0.0};
        if (std::isinf(v)) return Rule{RuleKind::Never, 0.0};
        return Rule{RuleKind::SwitchAbove, v};
    };
    ThresholdStrategy st;
    st.max_rule[0] = above(t.x12);
    st.max_rule[1] = t.y21 > 0.0 ? Rule{RuleKind::SwitchBelow, t.y21}
                                 : Rule{RuleKind::Never, 0.0};
    st.min_rule[0] = above(t.x12_prime);
    st.min_rule[1] = Rule{RuleKind::Never, 0.0};
    return st;
}

SearchGrids default_grids(const GameSpec& spec, int points_per_axis) {
    SearchGrids g;
    const int n = std::max(2, points_per_axis);
    const double lo = spec.x0 / 10.0, hi = spec.x0 * 10.0;
    const double step = std::log(hi / lo) / (n - 1);
    g.y21.push_back(0.0);
    g.x12_prime.push_back(kInf);
    for (int k = 0; k < n; ++k) {
        const double v = lo * std::exp(step * k);
        g.y21.push_back(v);
        g.x12_prime.push_back(v);
        g.x12.push_back(v);
    }
    std::sort(g.x12_prime.begin(), g.x12_prime.end());
    return g;
}

SearchResult threshold_search(const GameSpec& spec, double x, int i0, int j0,
                              const SearchGrids& grids, const HittingOptions& opts) {
    if (grids.y21.empty() || grids.x12_prime.empty() || grids.x12.empty())
        throw std::invalid_argument("threshold_search: empty grid axis");

    const size_t ny = grids.y21.size(), np = grids.x12_prime.size(), nx = grids.x12.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> val(ny * np * nx, nan);
    auto idx = [&](size_t a, size_t b, size_t c) { return (a * np + b) * nx + c; };

    auto feasible = [&](double y, double p, double xx) {
        if (!(xx > y)) return false;
        if (p == 0.0 || std::isinf(p)) return true;
        return y < p && p < xx;
    };

    // outer axis parallel, deterministic: every cell is written once
    auto worker = [&](size_t b_lo, size_t b_hi) {
        for (size_t b = b_lo; b < b_hi; ++b)
            for (size_t a = 0; a < ny; ++a)
                for (size_t c = 0; c < nx; ++c) {
                    const double y = grids.y21[a], p = grids.x12_prime[b],
                                 xx = grids.x12[c];
                    if (!feasible(y, p, xx)) continue;
                    val[idx(a, b, c)] =
                        j_values(spec, x, RegionTuple{y, p, xx}, opts).j[i0][j0];
                }
    };
    unsigned hw = std::thread::hardware_concurrency();
    const size_t nthreads = std::max<size_t>(1, std::min<size_t>(hw ? hw : 1, np));
    if (nthreads <= 1 || np < 4) {
        worker(0, np);
    } else {
        std::vector<std::thread> pool;
        const size_t chunk = (np + nthreads - 1) / nthreads;
        for (size_t t = 0; t < nthreads; ++t) {
            const size_t lo = t * chunk, hi = std::min(np, lo + chunk);
            if (lo < hi) pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    SearchResult res;
    res.surface.reserve(val.size() / 4);
    for (size_t a = 0; a < ny; ++a)
        for (size_t b = 0; b < np; ++b)
            for (size_t c = 0; c < nx; ++c) {
                const double v = val[idx(a, b, c)];
                if (!std::isnan(v))
                    res.surface.push_back(
                        {grids.y21[a], grids.x12_prime[b], grids.x12[c], v});
            }
    if (res.surface.empty())
        throw std::invalid_argument("threshold_search: no feasible grid tuple");

    // min over x12' of max over (y21, x12)
    bool have_outer = false;
    size_t best_b = 0, best_a = 0, best_c = 0;
    for (size_t b = 0; b < np; ++b) {
        bool have_inner = false;
        double vmax = 0.0;
        size_t ia = 0, ic = 0;
        for (size_t a = 0; a < ny; ++a)
            for (size_t c = 0; c < nx; ++c) {
                const double v = val[idx(a, b, c)];
                if (std::isnan(v)) continue;
                if (!have_inner || v > vmax) {
                    have_inner = true;
                    vmax = v;
                    ia = a;
                    ic = c;
                }
            }
        if (!have_inner) continue;
        if (!have_outer || vmax < res.value) {
            have_outer = true;
            res.value = vmax;
            best_b = b;
            best_a = ia;
            best_c = ic;
        }
    }

    // max over (y21, x12) of min over x12'
    bool have_mm = false;
    for (size_t a = 0; a < ny; ++a)
        for (size_t c = 0; c < nx; ++c) {
            bool have_inner = false;
            double vmin = 0.0;
            for (size_t b = 0; b < np; ++b) {
                const double v = val[idx(a, b, c)];
                if (std::isnan(v)) continue;
                if (!have_inner || v < vmin) {
                    have_inner = true;
                    vmin = v;
                }
            }
            if (!have_inner) continue;
            if (!have_mm || vmin > res.maxmin_value) {
                have_mm = true;
                res.maxmin_value = vmin;
            }
        }

    res.best = RegionTuple{grids.y21[best_a], grids.x12_prime[best_b], grids.x12[best_c]};
    res.minmax_gap = std::fabs(res.value - res.maxmin_value);
    return res;
}

}  // namespace switchgame
