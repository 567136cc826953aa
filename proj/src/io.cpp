#include "switchgame/io.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace switchgame {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::vector<std::string>& keys,
                  const std::string& where) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const auto& k : keys)
            if (item.key() == k) known = true;
        if (!known)
            throw std::invalid_argument("unknown key \"" + item.key() + "\" in " + where);
    }
    for (const auto& k : keys)
        if (!obj.contains(k))
            throw std::invalid_argument("missing field \"" + k + "\" in " + where);
}

std::array<std::array<double, 2>, 2> matrix2(const json& j, const std::string& name) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
        !j[1].is_array() || j[1].size() != 2)
        throw std::invalid_argument("field \"" + name + "\" must be a 2x2 array");
    std::array<std::array<double, 2>, 2> m{};
    for (int i = 0; i < 2; ++i)
        for (int jx = 0; jx < 2; ++jx) {
            if (!j[i][jx].is_number())
                throw std::invalid_argument("field \"" + name + "\" must be numeric");
            m[i][jx] = j[i][jx].get<double>();
        }
    return m;
}

double number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj[key].is_number())
        throw std::invalid_argument("field \"" + key + "\" in " + where +
                                    " must be numeric");
    return obj[key].get<double>();
}

}  // namespace

GameSpec spec_from_json(const json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("spec must be a JSON object");
    require_keys(doc, {"drift", "vol", "discount", "gamma", "cost_max", "cost_min", "x0"},
                 "spec");
    GameSpec s;
    s.drift = matrix2(doc["drift"], "drift");
    s.vol = matrix2(doc["vol"], "vol");
    s.discount = number(doc, "discount", "spec");
    s.gamma = number(doc, "gamma", "spec");
    s.x0 = number(doc, "x0", "spec");
    require_keys(doc["cost_max"], {"c12", "c21"}, "cost_max");
    require_keys(doc["cost_min"], {"chi12", "chi21"}, "cost_min");
    s.c12 = number(doc["cost_max"], "c12", "cost_max");
    s.c21 = number(doc["cost_max"], "c21", "cost_max");
    s.chi12 = number(doc["cost_min"], "chi12", "cost_min");
    s.chi21 = number(doc["cost_min"], "chi21", "cost_min");
    return s;
}

GameSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spec file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
    return spec_from_json(doc);
}

json spec_to_json(const GameSpec& s) {
    return json{{"drift", {{s.drift[0][0], s.drift[0][1]}, {s.drift[1][0], s.drift[1][1]}}},
                {"vol", {{s.vol[0][0], s.vol[0][1]}, {s.vol[1][0], s.vol[1][1]}}},
                {"discount", s.discount},
                {"gamma", s.gamma},
                {"cost_max", {{"c12", s.c12}, {"c21", s.c21}}},
                {"cost_min", {{"chi12", s.chi12}, {"chi21", s.chi21}}},
                {"x0", s.x0}};
}

namespace {

json region_to_json(const Region& r) {
    switch (r.kind) {
        case RegionKind::Empty: return json{{"kind", "empty"}};
        case RegionKind::All: return json{{"kind", "all"}};
        case RegionKind::LowerClosed:
            return json{{"kind", "lower"}, {"threshold", r.threshold}};
        case RegionKind::UpperClosed:
            return json{{"kind", "upper"}, {"threshold", r.threshold}};
    }
    return {};
}

Region region_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "empty") return {RegionKind::Empty, 0.0};
    if (kind == "all") return {RegionKind::All, 0.0};
    const double t = j.at("threshold").get<double>();
    if (kind == "lower") return {RegionKind::LowerClosed, t};
    if (kind == "upper") return {RegionKind::UpperClosed, t};
    throw std::invalid_argument("unknown region kind \"" + kind + "\"");
}

OrderCase order_from_string(const std::string& s) {
    for (OrderCase c : {OrderCase::Eq, OrderCase::RowLt, OrderCase::RowGt,
                        OrderCase::ColLt, OrderCase::ColGt})
        if (s == to_string(c)) return c;
    throw std::invalid_argument("unknown order case \"" + s + "\"");
}

CostCondition costs_from_string(const std::string& s) {
    for (CostCondition c : {CostCondition::B1, CostCondition::B2, CostCondition::B3,
                            CostCondition::B4})
        if (s == to_string(c)) return c;
    throw std::invalid_argument("unknown cost condition \"" + s + "\"");
}

}  // namespace

json solution_to_json(const Solution& sol) {
    json values = json::array();
    for (int i = 0; i < 2; ++i) {
        json row = json::array();
        for (int j = 0; j < 2; ++j) {
            json pieces = json::array();
            for (const Piece& p : sol.value[i][j].pieces()) {
                json jp{{"lo", p.lo},
                        {"coef_gamma", p.coef_gamma},
                        {"coef_mplus", p.coef_mplus},
                        {"coef_mminus", p.coef_mminus},
                        {"constant", p.constant},
                        {"m_plus", p.m_plus},
                        {"m_minus", p.m_minus}};
                if (std::isfinite(p.hi)) jp["hi"] = p.hi;
                pieces.push_back(jp);
            }
            row.push_back(json{{"pieces", pieces}});
        }
        values.push_back(row);
    }
    json derived = json::array();
    json rmax = json::array(), rmin = json::array();
    for (int i = 0; i < 2; ++i) {
        json drow = json::array(), maxrow = json::array(), minrow = json::array();
        for (int j = 0; j < 2; ++j) {
            drow.push_back(json{{"m_plus", sol.derived[i][j].m_plus},
                                {"m_minus", sol.derived[i][j].m_minus},
                                {"K", sol.derived[i][j].K}});
            maxrow.push_back(region_to_json(sol.region_max[i][j]));
            minrow.push_back(region_to_json(sol.region_min[i][j]));
        }
        derived.push_back(drow);
        rmax.push_back(maxrow);
        rmin.push_back(minrow);
    }
    json th;
    if (sol.thresholds.x_star) th["x_star"] = *sol.thresholds.x_star;
    if (sol.thresholds.x_a) th["x_a"] = *sol.thresholds.x_a;
    if (sol.thresholds.x_b) th["x_b"] = *sol.thresholds.x_b;
    if (sol.thresholds.lambda) th["lambda"] = *sol.thresholds.lambda;
    return json{{"order", to_string(sol.order)}, {"costs", to_string(sol.costs)},
                {"gamma", sol.value[0][0].gamma()}, {"derived", derived},
                {"values", values}, {"regions_max", rmax},
                {"regions_min", rmin}, {"thresholds", th}};
}

Solution solution_from_json(const json& doc) {
    Solution sol;
    sol.order = order_from_string(doc.at("order").get<std::string>());
    sol.costs = costs_from_string(doc.at("costs").get<std::string>());
    const double gamma = doc.at("gamma").get<double>();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const json& d = doc.at("derived")[i][j];
            sol.derived[i][j] = RegimeDerived{d.at("m_plus").get<double>(),
                                              d.at("m_minus").get<double>(),
                                              d.at("K").get<double>()};
            std::vector<Piece> pieces;
            for (const json& jp : doc.at("values")[i][j].at("pieces")) {
                Piece p;
                p.lo = jp.at("lo").get<double>();
                p.hi = jp.contains("hi") ? jp.at("hi").get<double>()
                                         : std::numeric_limits<double>::infinity();
                p.coef_gamma = jp.at("coef_gamma").get<double>();
                p.coef_mplus = jp.at("coef_mplus").get<double>();
                p.coef_mminus = jp.at("coef_mminus").get<double>();
                p.constant = jp.at("constant").get<double>();
                p.m_plus = jp.at("m_plus").get<double>();
                p.m_minus = jp.at("m_minus").get<double>();
                pieces.push_back(p);
            }
            sol.value[i][j] = PiecewiseValue(gamma, std::move(pieces));
            sol.region_max[i][j] = region_from_json(doc.at("regions_max")[i][j]);
            sol.region_min[i][j] = region_from_json(doc.at("regions_min")[i][j]);
        }
    const json& th = doc.at("thresholds");
    if (th.contains("x_star")) sol.thresholds.x_star = th["x_star"].get<double>();
    if (th.contains("x_a")) sol.thresholds.x_a = th["x_a"].get<double>();
    if (th.contains("x_b")) sol.thresholds.x_b = th["x_b"].get<double>();
    if (th.contains("lambda")) sol.thresholds.lambda = th["lambda"].get<double>();
    return sol;
}

Solution load_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open solution file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
    return solution_from_json(doc);
}

void save_solution(const Solution& sol, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << solution_to_json(sol).dump(2) << "\n";
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path);
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (size_t k = 0; k < cells.size(); ++k) {
        if (k) out_ << ',';
        out_ << cells[k];
    }
    out_ << '\n';
}

void CsvWriter::row_values(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_full(v));
    row(cells);
}

}  // namespace switchgame
