#include "bellconc/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bellconc/errors.hpp"

namespace bellconc {

std::string format_shortest(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw ParameterError("cannot format number");
  return std::string(buf, ptr);
}

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string complex_array(const Complex* data, std::size_t count, std::size_t per_line) {
  std::string out = "[";
  for (std::size_t i = 0; i < count; ++i) {
    if (i) out += ",";
    out += (i % per_line == 0) ? "\n    " : " ";
    out += "[" + format_g17(data[i].real()) + ", " + format_g17(data[i].imag()) + "]";
  }
  out += "\n  ]";
  return out;
}

nlohmann::json parse_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
  }
}

std::vector<Complex> complex_list(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw ParseError(std::string("missing array '") + key + "'", 0);
  std::vector<Complex> out;
  for (const auto& item : j.at(key)) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number()) {
      throw ParseError(std::string("entries of '") + key + "' must be [re, im] pairs", 0);
    }
    out.emplace_back(item[0].get<double>(), item[1].get<double>());
  }
  return out;
}

int qubit_count(const nlohmann::json& j) {
  if (!j.contains("n_qubits") || !j.at("n_qubits").is_number_integer()) throw ParseError("missing integer 'n_qubits'", 0);
  const int n = j.at("n_qubits").get<int>();
  if (n < 1 || n > 3) throw ParameterError("n_qubits must be 1, 2 or 3");
  return n;
}

}  // namespace

std::string density_matrix_to_json(const DensityMatrix& rho) {
  const auto d = static_cast<Eigen::Index>(rho.dim());
  std::vector<Complex> flat;
  flat.reserve(static_cast<std::size_t>(d * d));
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) flat.push_back(rho(r, c));
  return "{\n  \"n_qubits\": " + std::to_string(rho.n_qubits()) + ",\n  \"entries\": " +
         complex_array(flat.data(), flat.size(), static_cast<std::size_t>(d)) + "\n}\n";
}

DensityMatrix density_matrix_from_json(std::string_view text) {
  const auto j = parse_json(text);
  const int n = qubit_count(j);
  const auto flat = complex_list(j, "entries");
  const Eigen::Index d = Eigen::Index{1} << n;
  if (static_cast<Eigen::Index>(flat.size()) != d * d) throw ParseError("entries must hold 4^n values", 0);
  CMatrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = flat[static_cast<std::size_t>(r * d + c)];
  return DensityMatrix(m);
}

std::string pure_state_to_json(const PureState& psi) {
  const CVector& a = psi.amplitudes();
  return "{\n  \"n_qubits\": " + std::to_string(psi.n_qubits()) + ",\n  \"amplitudes\": " +
         complex_array(a.data(), static_cast<std::size_t>(a.size()), 1) + "\n}\n";
}

PureState pure_state_from_json(std::string_view text) {
  const auto j = parse_json(text);
  const int n = qubit_count(j);
  const auto amps = complex_list(j, "amplitudes");
  if (amps.size() != (std::size_t{1} << n)) throw ParseError("amplitudes must hold 2^n values", 0);
  CVector v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) v(static_cast<Eigen::Index>(i)) = amps[i];
  return PureState(v);
}

DensityMatrix load_state(const std::string& path) {
  const std::string text = read_text_file(path);
  const auto j = parse_json(text);
  if (j.contains("amplitudes")) return DensityMatrix::from_pure(pure_state_from_json(text));
  return density_matrix_from_json(text);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << text;
  if (!out) throw DataError("write failed for " + path);
}

}  // namespace bellconc
