#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "geoclust/dissim.hpp"

namespace geoclust::io {

enum class PanelLayout { long_format, wide_format };
PanelLayout parse_layout(const std::string& s);
std::string to_string(PanelLayout layout);

/// Minimal RFC 4180 reader: comma separated, double-quoted fields with ""
/// escapes, CRLF tolerated. Returns rows of fields.
std::vector<std::vector<std::string>> read_csv(std::istream& in);

/// Reads a dense panel.
///   long: columns unit_id, variable, year, value [, area]
///   wide: columns unit_id, variable [, area], then one column per year
/// When an area column is present every value is divided by the unit's area.
/// Empty or NA cells count as missing; any missing (unit, variable, year)
/// cell or duplicate key is an InputError naming the offending cells.
TimeSeriesPanel parse_panel(std::istream& in, PanelLayout layout);
TimeSeriesPanel read_panel(const std::filesystem::path& path, PanelLayout layout);
void write_panel(std::ostream& out, const TimeSeriesPanel& panel, PanelLayout layout);

/// Columns unit_id, lat, lon.
CoordinateSet parse_coords(std::istream& in);
CoordinateSet read_coords(const std::filesystem::path& path);

/// Reorders coordinates to follow unit_ids; every unit must be present.
CoordinateSet align_coords(const CoordinateSet& coords, const std::vector<std::string>& unit_ids);

/// Square matrix with a unit_id header row and column.
void write_matrix(std::ostream& out, const DissimMatrix& d, const std::vector<std::string>& unit_ids);
DissimMatrix read_matrix(std::istream& in, const std::string& label, std::vector<std::string>* unit_ids = nullptr);

/// Quotes a CSV field when it contains a separator, quote or newline.
std::string csv_field(const std::string& s);

/// Shortest round-trip text for a double.
std::string format_exact(double x);

/// Writes `contents` to a sibling temp file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace geoclust::io
