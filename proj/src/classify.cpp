#include "switchgame/classify.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace switchgame {

const char* to_string(CostCondition c) {
    switch (c) {
        case CostCondition::B1: return "B1";
        case CostCondition::B2: return "B2";
        case CostCondition::B3: return "B3";
        case CostCondition::B4: return "B4";
    }
    return "?";
}

const char* to_string(OrderCase c) {
    switch (c) {
        case OrderCase::Eq: return "EQ";
        case OrderCase::RowLt: return "ROW_LT";
        case OrderCase::RowGt: return "ROW_GT";
        case OrderCase::ColLt: return "COL_LT";
        case OrderCase::ColGt: return "COL_GT";
    }
    return "?";
}

CostCondition classify_costs(const GameSpec& spec) {
    const bool c12p = spec.c12 > 0.0, c12n = spec.c12 < 0.0;
    const bool chi12p = spec.chi12 > 0.0, chi12n = spec.chi12 < 0.0;
    const bool rest = spec.c21 > 0.0 && spec.chi21 > 0.0;
    const bool sums = spec.c12 + spec.c21 > 0.0 && spec.chi12 + spec.chi21 > 0.0;
    if (rest && sums) {
        if (c12p && chi12p) return CostCondition::B1;
        if (c12n && chi12p) return CostCondition::B2;
        if (c12p && chi12n) return CostCondition::B3;
        if (c12n && chi12n) return CostCondition::B4;
    }
    std::ostringstream os;
    os << "unsupported cost pattern (c12=" << spec.c12 << ", c21=" << spec.c21
       << ", chi12=" << spec.chi12 << ", chi21=" << spec.chi21
       << "): only B1-B4 are covered; relabel regimes to reach a covered row";
    throw std::invalid_argument(os.str());
}

namespace {

bool rel_equal(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

void reject_ambiguous(double a, double b, const char* what) {
    if (!rel_equal(a, b, kEqualRel) && rel_equal(a, b, kAmbiguousRel)) {
        std::ostringstream os;
        os << "ambiguous K classification: " << what << " agree to " << kAmbiguousRel
           << " but not to " << kEqualRel << "; perturb the spec or tighten inputs";
        throw std::invalid_argument(os.str());
    }
}

void require_same_roots(const RegimeDerived& a, const RegimeDerived& b, const char* what) {
    if (!rel_equal(a.m_plus, b.m_plus, kEqualRel) || !rel_equal(a.m_minus, b.m_minus, kEqualRel)) {
        std::ostringstream os;
        os << "equal K with unequal characteristic roots for " << what
           << ": outside the covered class (equal K must come with equal m+,m-)";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

OrderCase classify_order(const std::array<std::array<RegimeDerived, 2>, 2>& d) {
    const double k11 = d[0][0].K, k12 = d[0][1].K, k21 = d[1][0].K, k22 = d[1][1].K;
    const double ks[4] = {k11, k12, k21, k22};
    const char* names[4] = {"K11", "K12", "K21", "K22"};
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            std::string what = std::string(names[a]) + "," + names[b];
            reject_ambiguous(ks[a], ks[b], what.c_str());
        }

    const bool rows = rel_equal(k11, k12, kEqualRel) && rel_equal(k21, k22, kEqualRel);
    const bool cols = rel_equal(k11, k21, kEqualRel) && rel_equal(k12, k22, kEqualRel);
    if (rows && cols) {
        require_same_roots(d[0][0], d[0][1], "row 1");
        require_same_roots(d[1][0], d[1][1], "row 2");
        require_same_roots(d[0][0], d[1][0], "column 1");
        return OrderCase::Eq;
    }
    if (rows) {
        require_same_roots(d[0][0], d[0][1], "row 1");
        require_same_roots(d[1][0], d[1][1], "row 2");
        return k11 < k21 ? OrderCase::RowLt : OrderCase::RowGt;
    }
    if (cols) {
        require_same_roots(d[0][0], d[1][0], "column 1");
        require_same_roots(d[0][1], d[1][1], "column 2");
        return k11 < k12 ? OrderCase::ColLt : OrderCase::ColGt;
    }
    if (rel_equal(k11, k22, kEqualRel) && rel_equal(k12, k21, kEqualRel))
        throw std::invalid_argument(
            "uncovered K ordering: cross pairing K11=K22, K12=K21 is not covered");
    throw std::invalid_argument(
        "uncovered K ordering: K values do not pair by row or by column");
}

Classification classify(const GameSpec& spec) {
    Classification c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c.derived[i][j] = derive(spec, i, j);
    c.order = classify_order(c.derived);
    c.costs = classify_costs(spec);
    return c;
}

}  // namespace switchgame
