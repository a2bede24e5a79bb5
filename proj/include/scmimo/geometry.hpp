#pragma once

#include <string_view>

namespace scmimo {

enum class ArrayKind { ULA, UPA };

std::string_view to_string(ArrayKind kind);
ArrayKind parse_array_kind(std::string_view text);

/// Base-station antenna placement. Element spacing is normalized to the
/// carrier wavelength.
///
/// UPA elements are numbered row by row: element m sits in row
/// floor(m / per_row) and column m mod per_row.
class ArrayGeometry {
 public:
  static ArrayGeometry ula(int antennas, double spacing);
  static ArrayGeometry upa(int antennas, int per_row, double spacing);

  ArrayKind kind() const noexcept { return kind_; }
  int antennas() const noexcept { return antennas_; }
  int per_row() const noexcept { return per_row_; }
  int rows() const noexcept { return antennas_ / per_row_; }
  double spacing() const noexcept { return spacing_; }

  int row_of(int m) const { return m / per_row_; }
  int column_of(int m) const { return m - row_of(m) * per_row_; }

 private:
  ArrayGeometry(ArrayKind kind, int antennas, int per_row, double spacing);

  ArrayKind kind_;
  int antennas_;
  int per_row_;
  double spacing_;
};

// Normalized distance between elements i and j. Throws std::out_of_range.
double pairwise_distance(const ArrayGeometry& geometry, int i, int j);

}  // namespace scmimo
