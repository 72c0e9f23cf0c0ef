#pragma once

// Text and JSON formats for states, plus small number-formatting helpers
// shared by the other serializers.

#include <string>
#include <string_view>

#include "bellconc/qstate.hpp"

namespace bellconc {

/// Shortest decimal that parses back to exactly `x`.
std::string format_shortest(double x);

/// printf("%.17g").
std::string format_g17(double x);

/// {"n_qubits": n, "entries": [[re, im], ...]} in row-major order.
std::string density_matrix_to_json(const DensityMatrix& rho);
DensityMatrix density_matrix_from_json(std::string_view text);

/// {"n_qubits": n, "amplitudes": [[re, im], ...]}.
std::string pure_state_to_json(const PureState& psi);
PureState pure_state_from_json(std::string_view text);

/// Reads either format; pure states are turned into projectors.
DensityMatrix load_state(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace bellconc
