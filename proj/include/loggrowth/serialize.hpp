#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "loggrowth/growth.hpp"
#include "loggrowth/nabla.hpp"
#include "loggrowth/newton_polygon.hpp"
#include "loggrowth/series.hpp"

/*
 * JSON mapping for every value the CLI emits.  Conventions:
 *  - rationals cross the boundary as strings, "num" or "num/den": exact;
 *  - big integers and valuations as decimal strings (they overflow JSON
 *    number precision);
 *  - small structural counts (ranks, r indices) as JSON numbers;
 *  - estimator outputs as JSON numbers (they are genuinely floating);
 *  - ordered maps, no timestamps: serialization is byte-deterministic.
 * Every to_json has a from_json inverse so reports round-trip exactly.
 */

namespace loggrowth {

using json = nlohmann::ordered_json;

inline std::string rat_to_str(const Rational& q) { return q.str(); }

inline Rational rat_from_str(const std::string& s) {
    try {
        if (s.empty()) throw std::invalid_argument("empty");
        Rational q(s);
        return q;
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational \"num\" or \"num/den\" string: '" + s + "'");
    }
}

inline std::string big_to_str(const BigInt& x) { return x.str(); }

inline BigInt big_from_str(const std::string& s) {
    try {
        if (s.empty()) throw std::invalid_argument("empty");
        return BigInt(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a decimal integer string: '" + s + "'");
    }
}

inline std::int64_t i64_from_str(const std::string& s) {
    const BigInt x = big_from_str(s);
    if (x < std::numeric_limits<std::int64_t>::min() || x > std::numeric_limits<std::int64_t>::max())
        throw std::invalid_argument("integer out of 64-bit range: '" + s + "'");
    return x.convert_to<std::int64_t>();
}

// ---- series types ----

inline json to_json(const SparseTerm& t) {
    json j;
    j["exponent"] = big_to_str(t.exponent);
    j["valuation"] = std::to_string(t.valuation);
    j["coefficient"] = t.coefficient ? json(rat_to_str(*t.coefficient)) : json(nullptr);
    return j;
}

inline SparseTerm sparse_term_from_json(const json& j) {
    SparseTerm t;
    t.exponent = big_from_str(j.at("exponent").get<std::string>());
    t.valuation = i64_from_str(j.at("valuation").get<std::string>());
    if (!j.at("coefficient").is_null())
        t.coefficient = rat_from_str(j.at("coefficient").get<std::string>());
    return t;
}

inline json to_json(const SparseValSeries& s) {
    json terms = json::array();
    for (const auto& t : s.terms) terms.push_back(to_json(t));
    json j;
    j["terms"] = std::move(terms);
    j["truncation_bound"] = big_to_str(s.truncation_bound);
    return j;
}

inline SparseValSeries sparse_series_from_json(const json& j) {
    SparseValSeries s;
    for (const auto& t : j.at("terms")) s.terms.push_back(sparse_term_from_json(t));
    s.truncation_bound = big_from_str(j.at("truncation_bound").get<std::string>());
    return s;
}

inline json to_json(const TTerm& t) {
    json j;
    j["t_exponent"] = big_to_str(t.t_exponent);
    j["valuation"] = std::to_string(t.valuation);
    return j;
}

inline json to_json(const GenericCoeff& c) {
    json terms = json::array();
    for (const auto& t : c.t_terms) terms.push_back(to_json(t));
    json j;
    j["n"] = big_to_str(c.n);
    j["t_terms"] = std::move(terms);
    j["r_range"] = c.r_range;
    return j;
}

inline GenericCoeff generic_coeff_from_json(const json& j) {
    GenericCoeff c;
    c.n = big_from_str(j.at("n").get<std::string>());
    for (const auto& t : j.at("t_terms"))
        c.t_terms.push_back(TTerm{big_from_str(t.at("t_exponent").get<std::string>()),
                                  i64_from_str(t.at("valuation").get<std::string>())});
    c.r_range = j.at("r_range").get<std::uint32_t>();
    return c;
}

// ---- parameters ----

inline json to_json(const FamilyParams& p) {
    json j;
    j["p"] = std::to_string(p.p.value());
    j["sigma"] = rat_to_str(p.sigma);
    j["sigma_prime"] = rat_to_str(p.sigma_prime);
    j["delta"] = rat_to_str(p.delta);
    j["r_max"] = p.r_max;
    j["n_max"] = p.n_max ? json(big_to_str(*p.n_max)) : json(nullptr);
    return j;
}

inline FamilyParams family_params_from_json(const json& j) {
    const Prime p(i64_from_str(j.at("p").get<std::string>()));
    std::optional<BigInt> n_max;
    if (!j.at("n_max").is_null()) n_max = big_from_str(j.at("n_max").get<std::string>());
    FamilyParams out = FamilyParams::create(p, rat_from_str(j.at("sigma").get<std::string>()),
                                            rat_from_str(j.at("sigma_prime").get<std::string>()),
                                            j.at("r_max").get<std::uint32_t>(), std::move(n_max));
    if (out.delta != rat_from_str(j.at("delta").get<std::string>()))
        throw std::invalid_argument("family parameters: stored delta disagrees with (sigma - sigma')/(1 - sigma)");
    return out;
}

// ---- polygons ----

inline json to_json(const Vertex& v) {
    json j;
    j["x"] = v.x;
    j["y"] = rat_to_str(v.y);
    return j;
}

inline json to_json(const NewtonPolygon& P) {
    json vs = json::array();
    for (const auto& v : P.vertices()) vs.push_back(to_json(v));
    json j;
    j["vertices"] = std::move(vs);
    return j;
}

inline NewtonPolygon polygon_from_json(const json& j) {
    std::vector<Vertex> vs;
    for (const auto& v : j.at("vertices"))
        vs.push_back(Vertex{v.at("x").get<std::int64_t>(), rat_from_str(v.at("y").get<std::string>())});
    return NewtonPolygon(std::move(vs));
}

// ---- growth / report ----

inline json to_json(const GrowthSample& s) {
    json j;
    j["n1"] = big_to_str(s.n1);
    j["neg_valuation"] = std::to_string(s.neg_valuation);
    return j;
}

inline GrowthSample growth_sample_from_json(const json& j) {
    return GrowthSample{big_from_str(j.at("n1").get<std::string>()),
                        i64_from_str(j.at("neg_valuation").get<std::string>())};
}

inline json to_json(const ExactCheck& c) {
    json j;
    j["name"] = c.name;
    j["pass"] = c.pass;
    j["witness"] = c.witness;
    return j;
}

inline json to_json(const VerificationReport& r) {
    json checks = json::array();
    for (const auto& c : r.exact_checks) checks.push_back(to_json(c));
    json j;
    j["params"] = to_json(r.params);
    j["special_estimate"] = r.special_estimate;
    j["generic_estimate"] = r.generic_estimate;
    j["special_polygon"] = to_json(r.special_polygon);
    j["generic_polygon"] = to_json(r.generic_polygon);
    j["endpoint_gap"] = rat_to_str(r.endpoint_gap);
    j["exact_checks"] = std::move(checks);
    j["all_passed"] = r.all_passed();
    return j;
}

inline VerificationReport report_from_json(const json& j) {
    VerificationReport r{family_params_from_json(j.at("params")),
                         j.at("special_estimate").get<double>(),
                         j.at("generic_estimate").get<double>(),
                         polygon_from_json(j.at("special_polygon")),
                         polygon_from_json(j.at("generic_polygon")),
                         rat_from_str(j.at("endpoint_gap").get<std::string>()),
                         {}};
    for (const auto& c : j.at("exact_checks"))
        r.exact_checks.push_back(ExactCheck{c.at("name").get<std::string>(),
                                            c.at("pass").get<bool>(),
                                            c.at("witness").get<std::string>()});
    return r;
}

} // namespace loggrowth
