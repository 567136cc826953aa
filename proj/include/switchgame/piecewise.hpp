#ifndef SWITCHGAME_PIECEWISE_HPP
#define SWITCHGAME_PIECEWISE_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace switchgame {

/// One interval of a value function,
///   v(x) = coef_gamma x^gamma + coef_mplus x^m_plus + coef_mminus x^m_minus + constant
/// active on [lo, hi).  The exponents are stored per piece because a piece
/// may be expressed through another regime pair's roots (obstacle pieces).
struct Piece {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double coef_gamma = 0.0;
    double coef_mplus = 0.0;
    double coef_mminus = 0.0;
    double constant = 0.0;
    double m_plus = 0.0;
    double m_minus = 0.0;
};

/// A value function as contiguous pieces partitioning (0, inf).  Evaluation
/// at a breakpoint uses the right piece; the built solutions are continuous
/// there, so this is a presentation choice only.
class PiecewiseValue {
public:
    PiecewiseValue() = default;
    PiecewiseValue(double gamma, std::vector<Piece> pieces)
        : gamma_(gamma), pieces_(std::move(pieces)) {
        if (pieces_.empty()) throw std::invalid_argument("PiecewiseValue: no pieces");
        if (pieces_.front().lo != 0.0)
            throw std::invalid_argument("PiecewiseValue: first piece must start at 0");
        if (std::isfinite(pieces_.back().hi))
            throw std::invalid_argument("PiecewiseValue: last piece must reach infinity");
        for (size_t k = 1; k < pieces_.size(); ++k)
            if (pieces_[k].lo != pieces_[k - 1].hi)
                throw std::invalid_argument("PiecewiseValue: pieces must be contiguous");
    }

    double gamma() const { return gamma_; }
    const std::vector<Piece>& pieces() const { return pieces_; }

    const Piece& piece_at(double x) const {
        for (const Piece& p : pieces_)
            if (x < p.hi) return p;
        return pieces_.back();
    }

    double operator()(double x) const { return eval(piece_at(x), x); }
    double deriv(double x) const { return deriv1(piece_at(x), x); }
    double deriv2(double x) const { return d2(piece_at(x), x); }

    double eval(const Piece& p, double x) const {
        double v = p.constant;
        if (p.coef_gamma != 0.0) v += p.coef_gamma * std::pow(x, gamma_);
        if (p.coef_mplus != 0.0) v += p.coef_mplus * std::pow(x, p.m_plus);
        if (p.coef_mminus != 0.0) v += p.coef_mminus * std::pow(x, p.m_minus);
        return v;
    }
    double deriv1(const Piece& p, double x) const {
        double v = 0.0;
        if (p.coef_gamma != 0.0) v += p.coef_gamma * gamma_ * std::pow(x, gamma_ - 1.0);
        if (p.coef_mplus != 0.0) v += p.coef_mplus * p.m_plus * std::pow(x, p.m_plus - 1.0);
        if (p.coef_mminus != 0.0)
            v += p.coef_mminus * p.m_minus * std::pow(x, p.m_minus - 1.0);
        return v;
    }
    double d2(const Piece& p, double x) const {
        double v = 0.0;
        if (p.coef_gamma != 0.0)
            v += p.coef_gamma * gamma_ * (gamma_ - 1.0) * std::pow(x, gamma_ - 2.0);
        if (p.coef_mplus != 0.0)
            v += p.coef_mplus * p.m_plus * (p.m_plus - 1.0) * std::pow(x, p.m_plus - 2.0);
        if (p.coef_mminus != 0.0)
            v += p.coef_mminus * p.m_minus * (p.m_minus - 1.0) * std::pow(x, p.m_minus - 2.0);
        return v;
    }

    /// Interior breakpoints, ascending.
    std::vector<double> breakpoints() const {
        std::vector<double> bp;
        for (size_t k = 0; k + 1 < pieces_.size(); ++k) bp.push_back(pieces_[k].hi);
        return bp;
    }

private:
    double gamma_ = 0.5;
    std::vector<Piece> pieces_{Piece{}};
};

}  // namespace switchgame

#endif
