#include "switchgame/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace switchgame {

double max_drift(const GameSpec& spec) {
    double rho = spec.drift[0][0];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) rho = std::max(rho, spec.drift[i][j]);
    return rho;
}

static double k_denominator(const GameSpec& spec, int i, int j) {
    const double b = spec.b(i, j), s = spec.sigma(i, j), g = spec.gamma;
    return spec.discount - b * g + 0.5 * s * s * g * (1.0 - g);
}

ValidationReport validate(const GameSpec& spec) {
    ValidationReport report;
    if (!(spec.gamma > 0.0 && spec.gamma < 1.0))
        report.push_back("gamma out of (0,1)");
    if (!(spec.discount > 0.0)) report.push_back("discount must be positive");
    if (!(spec.x0 > 0.0)) report.push_back("x0 must be positive");
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!(spec.vol[i][j] > 0.0)) {
                std::ostringstream os;
                os << "vol[" << i + 1 << "][" << j + 1 << "] must be positive";
                report.push_back(os.str());
            }
    if (!(spec.c12 + spec.c21 > 0.0)) report.push_back("H3: c12+c21 <= 0");
    if (!(spec.chi12 + spec.chi21 > 0.0)) report.push_back("H3: chi12+chi21 <= 0");
    if (spec.gamma > 0.0 && spec.gamma < 1.0) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if (!(k_denominator(spec, i, j) > 0.0)) {
                    std::ostringstream os;
                    os << "no-switch value undefined: K denominator <= 0 at ("
                       << i + 1 << "," << j + 1 << ")";
                    report.push_back(os.str());
                }
    }
    if (!(spec.discount > max_drift(spec)))
        report.push_back("growth: discount r <= max drift rho");
    return report;
}

RegimeDerived derive(const GameSpec& spec, int i, int j) {
    const double b = spec.b(i, j), s2 = spec.sigma(i, j) * spec.sigma(i, j);
    const double r = spec.discount;
    const double h = 0.5 - b / s2;
    const double d = std::sqrt(h * h + 2.0 * r / s2);
    const double denom = k_denominator(spec, i, j);
    if (!(denom > 0.0)) {
        std::ostringstream os;
        os << "no-switch value undefined: K denominator " << denom << " at ("
           << i + 1 << "," << j + 1 << ")";
        throw std::invalid_argument(os.str());
    }
    return RegimeDerived{h + d, h - d, 1.0 / denom};
}

double no_switch_value(const GameSpec& spec, int i, int j, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("no_switch_value: x must be positive");
    return derive(spec, i, j).K * std::pow(x, spec.gamma);
}

}  // namespace switchgame
