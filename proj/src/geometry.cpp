#include "scmimo/geometry.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace scmimo {

std::string_view to_string(ArrayKind kind) {
  return kind == ArrayKind::ULA ? "ULA" : "UPA";
}

ArrayKind parse_array_kind(std::string_view text) {
  if (text == "ULA" || text == "ula") return ArrayKind::ULA;
  if (text == "UPA" || text == "upa") return ArrayKind::UPA;
  throw std::invalid_argument("unknown array kind '" + std::string(text) + "'");
}

ArrayGeometry::ArrayGeometry(ArrayKind kind, int antennas, int per_row, double spacing)
    : kind_(kind), antennas_(antennas), per_row_(per_row), spacing_(spacing) {
  if (antennas <= 0) throw std::invalid_argument("array needs at least one antenna");
  if (per_row <= 0 || antennas % per_row != 0)
    throw std::invalid_argument("UPA antenna count " + std::to_string(antennas) +
                                " is not a multiple of the row length " + std::to_string(per_row));
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw std::invalid_argument("element spacing must be positive and finite");
}

ArrayGeometry ArrayGeometry::ula(int antennas, double spacing) {
  return ArrayGeometry(ArrayKind::ULA, antennas, antennas, spacing);
}

ArrayGeometry ArrayGeometry::upa(int antennas, int per_row, double spacing) {
  return ArrayGeometry(ArrayKind::UPA, antennas, per_row, spacing);
}

double pairwise_distance(const ArrayGeometry& geometry, int i, int j) {
  const int m = geometry.antennas();
  if (i < 0 || j < 0 || i >= m || j >= m)
    throw std::out_of_range("antenna index out of range for an array of " + std::to_string(m));
  if (geometry.kind() == ArrayKind::ULA) return std::abs(i - j) * geometry.spacing();
  const double row_offset = std::abs(geometry.row_of(i) - geometry.row_of(j));
  const double col_offset = std::abs(geometry.column_of(i) - geometry.column_of(j));
  return geometry.spacing() * std::sqrt(row_offset * row_offset + col_offset * col_offset);
}

}  // namespace scmimo
