#ifndef SHIFTMETRIC_JSON_IO_HPP
#define SHIFTMETRIC_JSON_IO_HPP

#include "shiftmetric/polynomial.hpp"
#include "shiftmetric/shiftlocus.hpp"

#include <json.hpp>

#include <string>

namespace shiftmetric {

// {"degree": D, "coeffs": [[re, im], ...]} with coeffs ordered a_{D-2}..a_0;
// bare numbers are accepted for real coefficients.
Polynomial polynomial_from_json(const nlohmann::json& j);
nlohmann::json polynomial_to_json(const Polynomial& f);

nlohmann::json heights_to_json(const CriticalHeights& h);
CriticalHeights heights_from_json(const nlohmann::json& j);

// Length arrays use the string "inf" for infinite entries.
std::vector<double> lengths_from_json(const nlohmann::json& j, bool* extended);
nlohmann::json lengths_to_json(const std::vector<double>& lengths);

// {"D": 3, "regime": "h2=a*h1", "a": 0.5, "kGrid": [...]}; regime "custom"
// takes explicit "coeff"/"power"/"logpow" arrays.
SequenceFamily family_from_json(const nlohmann::json& j);

// Reads inline JSON (first non-space character '{' or '[') or a file path.
nlohmann::json load_json_arg(const std::string& arg);

// 17 significant digits, the CSV float format.
std::string format_g17(double v);

} // namespace shiftmetric

#endif
