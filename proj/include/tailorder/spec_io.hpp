#pragma once

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tailorder/distribution.hpp"
#include "tailorder/error.hpp"

namespace tailorder {

using json = nlohmann::json;

namespace detail {

inline void expect_fields(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key())) throw ParseError(where + ": unknown field \"" + it.key() + "\"");
}

inline double number_field(const json& j, const std::string& where, const char* field) {
    auto it = j.find(field);
    if (it == j.end()) throw ParseError(where + ": missing field \"" + field + "\"");
    if (!it->is_number()) throw ParseError(where + ": field \"" + field + "\" must be a number");
    return it->get<double>();
}

inline Distortion distortion_from_json(const json& j) {
    const std::string where = "distortion";
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    auto kind = j.find("kind");
    if (kind == j.end() || !kind->is_string()) throw ParseError(where + ": missing string field \"kind\"");
    const auto k = kind->get<std::string>();
    try {
        if (k == "identity") {
            expect_fields(j, where, {"kind"});
            return Distortion::identity();
        }
        if (k == "power") {
            expect_fields(j, where, {"kind", "alpha"});
            return Distortion::power(number_field(j, where, "alpha"));
        }
        if (k == "dual_power") {
            expect_fields(j, where, {"kind", "beta"});
            return Distortion::dual_power(number_field(j, where, "beta"));
        }
    } catch (const ParameterError& e) {
        throw ParseError(e.what());
    }
    throw ParseError(where + ": unknown kind \"" + k + "\"");
}

} // namespace detail

/// Parses a distribution spec object such as {"family":"pareto","a":2,"k":1}.
/// Unknown fields are rejected; parameter errors are reported as ParseError
/// naming the family and field.
inline DistributionSpec spec_from_json(const json& j) {
    using detail::expect_fields;
    using detail::number_field;
    if (!j.is_object()) throw ParseError("spec: expected a JSON object");
    auto fam = j.find("family");
    if (fam == j.end() || !fam->is_string()) throw ParseError("spec: missing string field \"family\"");
    const auto f = fam->get<std::string>();
    try {
        if (f == "gpd") {
            expect_fields(j, f, {"family", "xi", "mu", "sigma"});
            return DistributionSpec::gpd(number_field(j, f, "xi"), number_field(j, f, "mu"), number_field(j, f, "sigma"));
        }
        if (f == "pareto") {
            expect_fields(j, f, {"family", "a", "k"});
            return DistributionSpec::pareto(number_field(j, f, "a"), number_field(j, f, "k"));
        }
        if (f == "logistic") {
            expect_fields(j, f, {"family", "mu", "sigma"});
            return DistributionSpec::logistic(number_field(j, f, "mu"), number_field(j, f, "sigma"));
        }
        if (f == "loglogistic") {
            expect_fields(j, f, {"family", "scale", "shape"});
            return DistributionSpec::loglogistic(number_field(j, f, "scale"), number_field(j, f, "shape"));
        }
        if (f == "uniform") {
            expect_fields(j, f, {"family", "lo", "hi"});
            return DistributionSpec::uniform(number_field(j, f, "lo"), number_field(j, f, "hi"));
        }
        if (f == "ce1_mixture") {
            expect_fields(j, f, {"family", "p0"});
            return DistributionSpec::ce1_mixture(number_field(j, f, "p0"));
        }
        if (f == "distorted") {
            expect_fields(j, f, {"family", "base", "distortion"});
            if (!j.contains("base")) throw ParseError("distorted: missing field \"base\"");
            if (!j.contains("distortion")) throw ParseError("distorted: missing field \"distortion\"");
            return DistributionSpec::distorted(spec_from_json(j.at("base")), detail::distortion_from_json(j.at("distortion")));
        }
    } catch (const ParameterError& e) {
        throw ParseError(e.what());
    }
    throw ParseError("spec: unknown family \"" + f + "\"");
}

inline json to_json(const Distortion& d) {
    switch (d.kind()) {
    case Distortion::Kind::power: return {{"kind", "power"}, {"alpha", d.exponent()}};
    case Distortion::Kind::dual_power: return {{"kind", "dual_power"}, {"beta", d.exponent()}};
    default: return {{"kind", "identity"}};
    }
}

inline json to_json(const DistributionSpec& spec) {
    return std::visit(
        [](const auto& f) -> json {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Gpd>)
                return {{"family", "gpd"}, {"xi", f.xi}, {"mu", f.mu}, {"sigma", f.sigma}};
            else if constexpr (std::is_same_v<T, ClassicalPareto>)
                return {{"family", "pareto"}, {"a", f.a}, {"k", f.k}};
            else if constexpr (std::is_same_v<T, Logistic>)
                return {{"family", "logistic"}, {"mu", f.mu}, {"sigma", f.sigma}};
            else if constexpr (std::is_same_v<T, LogLogistic>)
                return {{"family", "loglogistic"}, {"scale", f.scale}, {"shape", f.shape}};
            else if constexpr (std::is_same_v<T, Uniform>)
                return {{"family", "uniform"}, {"lo", f.lo}, {"hi", f.hi}};
            else if constexpr (std::is_same_v<T, Ce1Mixture>)
                return {{"family", "ce1_mixture"}, {"p0", f.p0}};
            else
                return {{"family", "distorted"}, {"base", to_json(*f.base)}, {"distortion", to_json(f.distortion)}};
        },
        spec.family());
}

inline DistributionSpec parse_spec(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("spec: invalid JSON: ") + e.what());
    }
    return spec_from_json(j);
}

inline DistributionSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open spec file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_spec(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline void save_spec(const DistributionSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write spec file " + path);
    out << to_json(spec).dump(2) << '\n';
}

} // namespace tailorder
