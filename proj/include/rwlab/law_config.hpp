#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rwlab/walk_model.hpp"

namespace rwlab {

/// Parses "num/den", "num" or a JSON integer into an exact rational.
inline Rational parse_rational(const std::string& text) {
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    auto parse_int = [&](const std::string& raw) {
        const std::string s = trim(raw);
        require(!s.empty(), ErrorCode::ParseError, "empty integer in '" + text + "'");
        std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        require(start < s.size(), ErrorCode::ParseError, "bad integer in '" + text + "'");
        for (std::size_t i = start; i < s.size(); ++i)
            require(s[i] >= '0' && s[i] <= '9', ErrorCode::ParseError,
                    "bad integer in '" + text + "'");
        return boost::multiprecision::cpp_int(s[0] == '+' ? s.substr(1) : s);
    };
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(parse_int(text));
    const auto num = parse_int(text.substr(0, slash));
    const auto den = parse_int(text.substr(slash + 1));
    require(den != 0, ErrorCode::ParseError, "zero denominator in '" + text + "'");
    return Rational(num, den);
}

inline StepLaw law_from_json(const nlohmann::json& j, int max_span = kDefaultMaxSpan) {
    require(j.is_object(), ErrorCode::ParseError, "law config must be an object");
    std::string name = j.value("name", std::string());
    require(j.contains("pairs") && j["pairs"].is_array(), ErrorCode::ParseError,
            "law config needs a 'pairs' array");
    std::vector<RawPair> pairs;
    for (const auto& item : j["pairs"]) {
        require(item.is_array() && item.size() == 2 && item[0].is_number_integer(),
                ErrorCode::ParseError, "each pair must be [integer, \"num/den\"]");
        RawPair rp;
        rp.increment = item[0].get<int>();
        if (item[1].is_string())
            rp.weight = parse_rational(item[1].get<std::string>());
        else if (item[1].is_number_integer())
            rp.weight = Rational(item[1].get<long long>());
        else
            fail(ErrorCode::ParseError, "weights must be strings \"num/den\" to stay exact");
        pairs.push_back(rp);
    }
    return build_law(std::move(pairs), std::move(name), max_span);
}

inline StepLaw load_law(const std::string& path, int max_span = kDefaultMaxSpan) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::Io, "cannot open law file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, path + ": " + e.what());
    }
    return law_from_json(j, max_span);
}

}  // namespace rwlab
