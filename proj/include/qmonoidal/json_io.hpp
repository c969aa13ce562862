#pragma once

#include "qmonoidal/core.hpp"

#include <json.hpp>

#include <string>

namespace qmon {

using json = nlohmann::json;

/// Rounds to `digits` significant decimal digits (report formatting).
double round_sig(double v, int digits = 12);

/// {"n": n, "entries": [[[re, im], ...], ...]}, row-major. With digits = 17
/// the values round-trip exactly.
json matrix_to_json(const Mat& m, int digits = 17);
/// Throws InvalidInput on malformed input; accepts bare numbers as real entries.
Mat matrix_from_json(const json& j);

Mat read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const Mat& m);

}  // namespace qmon
