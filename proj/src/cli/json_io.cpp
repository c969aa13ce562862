#include "qmonoidal/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace qmon {

double round_sig(double v, int digits) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

json matrix_to_json(const Mat& m, int digits) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(json::array({round_sig(m(i, j).real(), digits), round_sig(m(i, j).imag(), digits)}));
    rows.push_back(std::move(row));
  }
  return json{{"n", m.rows()}, {"entries", std::move(rows)}};
}

namespace {

cplx entry(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw Error(ErrorKind::InvalidInput, "matrix entry must be a number or [re, im]");
}

}  // namespace

Mat matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array())
    throw Error(ErrorKind::InvalidInput, "matrix JSON needs an \"entries\" array");
  const json& rows = j["entries"];
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  if (j.contains("n") && (!j["n"].is_number_integer() || j["n"].get<Eigen::Index>() != n))
    throw Error(ErrorKind::InvalidInput, "\"n\" does not match the number of rows");
  if (n == 0) throw Error(ErrorKind::InvalidInput, "empty matrix");
  Mat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!rows[i].is_array() || static_cast<Eigen::Index>(rows[i].size()) != n)
      throw Error(ErrorKind::InvalidInput, "matrix must be square");
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = entry(rows[i][k]);
  }
  return m;
}

Mat read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, path + ": " + e.what());
  }
  return matrix_from_json(j);
}

void write_matrix_file(const std::string& path, const Mat& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  out << matrix_to_json(m).dump() << '\n';
}

}  // namespace qmon
