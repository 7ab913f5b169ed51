#include "shiftmetric/json_io.hpp"

#include "shiftmetric/errors.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace shiftmetric {

using nlohmann::json;

Polynomial polynomial_from_json(const json& j) {
    if (!j.is_object() || !j.contains("degree") || !j.contains("coeffs"))
        throw DomainError("polynomial JSON needs {\"degree\", \"coeffs\"}");
    const int degree = j.at("degree").get<int>();
    std::vector<std::complex<double>> coeffs;
    for (const auto& c : j.at("coeffs")) {
        if (c.is_number()) {
            coeffs.emplace_back(c.get<double>(), 0.0);
        } else if (c.is_array() && c.size() == 2) {
            coeffs.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
        } else {
            throw DomainError("coefficients must be numbers or [re, im] pairs");
        }
    }
    return Polynomial(degree, std::move(coeffs));
}

json polynomial_to_json(const Polynomial& f) {
    json coeffs = json::array();
    for (const auto& c : f.coeffs)
        coeffs.push_back({c.real(), c.imag()});
    return {{"degree", f.degree}, {"coeffs", coeffs}};
}

json heights_to_json(const CriticalHeights& h) {
    return json(h.h);
}

CriticalHeights heights_from_json(const json& j) {
    if (!j.is_array())
        throw DomainError("heights JSON must be an array");
    return CriticalHeights(j.get<std::vector<double>>());
}

std::vector<double> lengths_from_json(const json& j, bool* extended) {
    if (!j.is_array())
        throw DomainError("length JSON must be an array");
    std::vector<double> out;
    bool ext = false;
    for (const auto& v : j) {
        if (v.is_string()) {
            if (v.get<std::string>() != "inf")
                throw DomainError("only the string \"inf\" is allowed in length arrays");
            out.push_back(std::numeric_limits<double>::infinity());
            ext = true;
        } else {
            out.push_back(v.get<double>());
        }
    }
    if (extended)
        *extended = ext;
    return out;
}

json lengths_to_json(const std::vector<double>& lengths) {
    json out = json::array();
    for (double v : lengths) {
        if (std::isinf(v))
            out.push_back("inf");
        else
            out.push_back(v);
    }
    return out;
}

SequenceFamily family_from_json(const json& j) {
    if (!j.is_object() || !j.contains("D") || !j.contains("regime"))
        throw DomainError("family JSON needs {\"D\", \"regime\"}");
    const int D = j.at("D").get<int>();
    const std::string regime = j.at("regime").get<std::string>();
    std::vector<double> kGrid;
    if (j.contains("kGrid"))
        kGrid = j.at("kGrid").get<std::vector<double>>();

    if (regime == "custom") {
        SequenceFamily fam;
        fam.D = D;
        fam.regime = regime;
        fam.kGrid = std::move(kGrid);
        fam.coeff = j.at("coeff").get<std::vector<double>>();
        fam.power = j.at("power").get<std::vector<double>>();
        fam.logpow = j.contains("logpow") ? j.at("logpow").get<std::vector<double>>()
                                          : std::vector<double>(fam.coeff.size(), 0.0);
        return fam;
    }
    const double a = j.contains("a") ? j.at("a").get<double>() : 1.0;
    return SequenceFamily::named(regime, D, a, std::move(kGrid));
}

json load_json_arg(const std::string& arg) {
    std::size_t i = 0;
    while (i < arg.size() && std::isspace(static_cast<unsigned char>(arg[i])))
        ++i;
    if (i < arg.size() && (arg[i] == '{' || arg[i] == '['))
        return json::parse(arg);
    std::ifstream in(arg);
    if (!in)
        throw DomainError("cannot open JSON file '" + arg + "'");
    json j;
    in >> j;
    return j;
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace shiftmetric
