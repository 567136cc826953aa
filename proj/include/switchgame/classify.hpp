#ifndef SWITCHGAME_CLASSIFY_HPP
#define SWITCHGAME_CLASSIFY_HPP

#include <array>
#include <string>

#include "switchgame/model.hpp"

namespace switchgame {

/// Sign pattern of the four switching costs.  Only these four rows are
/// covered by the explicit solutions; other patterns must be relabelled by
/// hand (see README) before solving.
enum class CostCondition { B1, B2, B3, B4 };

/// Grouping of the four no-switch coefficients K_ij.
///   Eq     : all equal
///   RowLt  : K11 = K12 < K21 = K22   (player I's regime decides, 1 pays less)
///   RowGt  : K11 = K12 > K21 = K22
///   ColLt  : K11 = K21 < K12 = K22   (player II's regime decides)
///   ColGt  : K11 = K21 > K12 = K22
enum class OrderCase { Eq, RowLt, RowGt, ColLt, ColGt };

const char* to_string(CostCondition c);
const char* to_string(OrderCase c);

/// K-equality grouping uses this relative tolerance.
inline constexpr double kEqualRel = 1e-9;
/// Pairs whose K differ by less than this but more than kEqualRel are
/// rejected as ambiguous instead of silently classified.
inline constexpr double kAmbiguousRel = 1e-6;

/// Classifies the cost sign pattern.  Throws std::invalid_argument with
/// "unsupported cost pattern" when no covered row matches (e.g. c21 < 0).
CostCondition classify_costs(const GameSpec& spec);

/// Classifies the K ordering from the four derived constants, indexed
/// derived[i][j].  Throws on cross pairings ("uncovered K ordering"),
/// ambiguous near-equalities, and K-equal groups whose characteristic roots
/// disagree (the solutions require equal K to come with equal exponents).
OrderCase classify_order(const std::array<std::array<RegimeDerived, 2>, 2>& derived);

/// Convenience: derive all four pairs and classify both axes.
struct Classification {
    OrderCase order;
    CostCondition costs;
    std::array<std::array<RegimeDerived, 2>, 2> derived;
};
Classification classify(const GameSpec& spec);

}  // namespace switchgame

#endif
