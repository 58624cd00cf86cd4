#pragma once

#include <json.hpp>

#include "rrunits/cyclounits.hpp"
#include "rrunits/galois.hpp"
#include "rrunits/numeric.hpp"
#include "rrunits/qseries.hpp"
#include "rrunits/siegel.hpp"
#include "rrunits/units.hpp"

namespace rrunits {

using json = nlohmann::json;

// all rationals travel as "p/q" strings; floats never enter exact payloads

inline json to_json(const CycNum& c) {
    json coeffs = json::array();
    for (const Rat& x : c.coeffs()) coeffs.push_back(rat_str(x));
    return json{{"level", c.level()}, {"coeffs", coeffs}};
}

inline CycNum cycnum_from_json(const json& j) {
    unsigned level = j.at("level").get<unsigned>();
    std::vector<Rat> coeffs;
    for (const auto& s : j.at("coeffs")) coeffs.push_back(rat_parse(s.get<std::string>()));
    return CycNum(level, std::move(coeffs));
}

inline json to_json(const QSeries& s) {
    json terms = json::array();
    for (const auto& [e, c] : s.terms()) {
        json coeff = c.is_rational() ? json(rat_str(c.rational_value())) : to_json(c);
        terms.push_back(json::array({rat_str(e), coeff}));
    }
    unsigned lvl = s.coeff_level();
    return json{{"denom", s.denom()},
                {"order", rat_str(s.order())},
                {"coeff_level", lvl == 1 ? json("Q") : json(lvl)},
                {"terms", terms}};
}

inline QSeries qseries_from_json(const json& j) {
    QSeries s(rat_parse(j.at("order").get<std::string>()));
    for (const auto& t : j.at("terms")) {
        Rat e = rat_parse(t.at(0).get<std::string>());
        const json& cj = t.at(1);
        CycNum c = cj.is_string() ? CycNum(rat_parse(cj.get<std::string>())) : cycnum_from_json(cj);
        if (!c.is_zero() && e < s.order()) s.raw_terms()[e] = c;
    }
    return s;
}

inline json to_json(const KLSums& s) {
    return json{{"a1_sq", int_str(s.a1_sq)},
                {"a2_sq", int_str(s.a2_sq)},
                {"a1_a2", int_str(s.a1_a2)},
                {"mult", int_str(s.mult)},
                {"ell", s.ell},
                {"passes", s.passes()}};
}

inline json to_json(const RankReport& r) {
    return json{{"ell", r.ell},         {"c", r.c},
                {"k", r.k},             {"d", r.d},
                {"formula_rank", r.formula_rank}, {"matrix_rank", r.matrix_rank},
                {"agree", r.agree}};
}

inline json to_json(const CycloRankReport& r) {
    return json{{"ell", r.ell},
                {"k", r.k},
                {"d", r.d},
                {"exact_rank", r.exact_rank},
                {"formula_rank", r.formula_rank},
                {"numeric_rank", r.numeric_rank},
                {"agree", r.agree},
                {"numeric_agree", r.numeric_agree}};
}

inline json to_json(const DivisorVector& v) {
    json ord = json::array();
    for (const Rat& x : v.ord) ord.push_back(rat_str(x));
    return json{{"ell", v.ell}, {"ord", ord}};
}

inline json to_json(const GL2Class& g) { return json::array({g.m[0], g.m[1], g.m[2], g.m[3]}); }

}  // namespace rrunits
