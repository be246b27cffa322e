#include "geoclust/panel_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "geoclust/error.hpp"

namespace geoclust::io {

PanelLayout parse_layout(const std::string& s) {
  if (s == "long") return PanelLayout::long_format;
  if (s == "wide") return PanelLayout::wide_format;
  throw InputError("layout must be 'long' or 'wide', got '" + s + "'");
}

std::string to_string(PanelLayout layout) { return layout == PanelLayout::long_format ? "long" : "wide"; }

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  auto end_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
    any = false;
  };
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      end_row();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw InputError("CSV: unterminated quoted field");
  if (any) end_row();
  return rows;
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool is_missing(const std::string& s) { return s.empty() || s == "NA" || s == "NaN" || s == "nan"; }

double parse_double(const std::string& s, const std::string& where) {
  double x = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last || !std::isfinite(x))
    throw InputError("not a finite number '" + s + "' at " + where);
  return x;
}

int parse_year(const std::string& s, const std::string& where) {
  int y = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), y);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InputError("not an integer year '" + s + "' at " + where);
  return y;
}

std::map<std::string, std::size_t> header_index(const std::vector<std::string>& header) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < header.size(); ++i)
    if (!idx.emplace(trim(header[i]), i).second) throw InputError("duplicate CSV column '" + header[i] + "'");
  return idx;
}

std::size_t require_column(const std::map<std::string, std::size_t>& idx, const std::string& name) {
  const auto it = idx.find(name);
  if (it == idx.end()) throw InputError("CSV is missing column '" + name + "'");
  return it->second;
}

std::string row_ref(std::size_t line) { return "line " + std::to_string(line + 1); }

// Collects cells keyed by (unit, variable, year) in first-seen unit and
// variable order, then densifies.
class PanelBuilder {
 public:
  void add(const std::string& unit, const std::string& var, int year, std::optional<double> value,
           std::optional<double> area, const std::string& where) {
    const std::size_t u = intern(unit, units_, unit_index_);
    const std::size_t v = intern(var, vars_, var_index_);
    years_.insert(year);
    if (area) {
      if (!(*area > 0.0)) throw InputError("area must be positive at " + where);
      auto [it, fresh] = areas_.emplace(u, *area);
      if (!fresh && it->second != *area) throw InputError("inconsistent area for unit '" + unit + "' at " + where);
    }
    const auto key = std::make_tuple(u, v, year);
    if (seen_.count(key)) {
      throw InputError("duplicate cell (" + unit + ", " + var + ", " + std::to_string(year) + ") at " + where);
    }
    seen_.insert(key);
    if (value) cells_[key] = *value;
  }

  TimeSeriesPanel build(bool has_area) {
    TimeSeriesPanel p;
    p.unit_ids = units_;
    p.variable_names = vars_;
    p.years.assign(years_.begin(), years_.end());
    p.values.assign(p.units() * p.variables() * p.length(), 0.0);
    std::vector<std::string> gaps;
    std::size_t gap_count = 0;
    for (std::size_t u = 0; u < p.units(); ++u) {
      for (std::size_t v = 0; v < p.variables(); ++v) {
        for (std::size_t t = 0; t < p.length(); ++t) {
          const auto it = cells_.find(std::make_tuple(u, v, p.years[t]));
          if (it == cells_.end()) {
            if (gaps.size() < 20)
              gaps.push_back("(" + units_[u] + ", " + vars_[v] + ", " + std::to_string(p.years[t]) + ")");
            ++gap_count;
            continue;
          }
          double x = it->second;
          if (has_area) {
            const auto a = areas_.find(u);
            if (a == areas_.end()) throw InputError("no area given for unit '" + units_[u] + "'");
            x /= a->second;
          }
          p.at(u, v, t) = x;
        }
      }
    }
    if (gap_count) {
      std::string msg = "panel has " + std::to_string(gap_count) + " missing cell(s):";
      for (const auto& g : gaps) msg += " " + g;
      if (gap_count > gaps.size()) msg += " ...";
      throw InputError(msg);
    }
    p.validate();
    return p;
  }

 private:
  static std::size_t intern(const std::string& s, std::vector<std::string>& names,
                            std::unordered_map<std::string, std::size_t>& index) {
    const auto [it, fresh] = index.emplace(s, names.size());
    if (fresh) names.push_back(s);
    return it->second;
  }

  std::vector<std::string> units_, vars_;
  std::unordered_map<std::string, std::size_t> unit_index_, var_index_;
  std::set<int> years_;
  std::map<std::size_t, double> areas_;
  std::set<std::tuple<std::size_t, std::size_t, int>> seen_;
  std::map<std::tuple<std::size_t, std::size_t, int>, double> cells_;
};

}  // namespace

TimeSeriesPanel parse_panel(std::istream& in, PanelLayout layout) {
  const auto rows = read_csv(in);
  if (rows.empty()) throw InputError("panel CSV is empty");
  const auto idx = header_index(rows[0]);
  const auto area_it = idx.find("area");
  const bool has_area = area_it != idx.end();
  const std::size_t c_unit = require_column(idx, "unit_id");
  const std::size_t c_var = require_column(idx, "variable");
  PanelBuilder b;

  auto optional_value = [](const std::string& raw, const std::string& where) -> std::optional<double> {
    const auto s = trim(raw);
    if (is_missing(s)) return std::nullopt;
    return parse_double(s, where);
  };

  if (layout == PanelLayout::long_format) {
    const std::size_t c_year = require_column(idx, "year");
    const std::size_t c_value = require_column(idx, "value");
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& row = rows[r];
      const auto where = row_ref(r);
      if (row.size() != rows[0].size()) throw InputError("wrong number of fields at " + where);
      std::optional<double> area;
      if (has_area) area = optional_value(row[area_it->second], where);
      b.add(trim(row[c_unit]), trim(row[c_var]), parse_year(trim(row[c_year]), where),
            optional_value(row[c_value], where), area, where);
    }
  } else {
    std::vector<std::pair<std::size_t, int>> year_cols;
    for (const auto& [name, col] : idx) {
      if (name == "unit_id" || name == "variable" || name == "area") continue;
      year_cols.emplace_back(col, parse_year(name, "header"));
    }
    if (year_cols.empty()) throw InputError("wide panel has no year columns");
    std::sort(year_cols.begin(), year_cols.end());
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& row = rows[r];
      const auto where = row_ref(r);
      if (row.size() != rows[0].size()) throw InputError("wrong number of fields at " + where);
      std::optional<double> area;
      if (has_area) area = optional_value(row[area_it->second], where);
      for (const auto& [col, year] : year_cols)
        b.add(trim(row[c_unit]), trim(row[c_var]), year, optional_value(row[col], where), area, where);
    }
  }
  return b.build(has_area);
}

TimeSeriesPanel read_panel(const std::filesystem::path& path, PanelLayout layout) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open panel file " + path.string());
  return parse_panel(in, layout);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_exact(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_panel(std::ostream& out, const TimeSeriesPanel& panel, PanelLayout layout) {
  if (layout == PanelLayout::long_format) {
    out << "unit_id,variable,year,value\n";
    for (std::size_t u = 0; u < panel.units(); ++u)
      for (std::size_t v = 0; v < panel.variables(); ++v)
        for (std::size_t t = 0; t < panel.length(); ++t)
          out << csv_field(panel.unit_ids[u]) << ',' << csv_field(panel.variable_names[v]) << ',' << panel.years[t] << ','
              << format_exact(panel.at(u, v, t)) << '\n';
  } else {
    out << "unit_id,variable";
    for (int y : panel.years) out << ',' << y;
    out << '\n';
    for (std::size_t u = 0; u < panel.units(); ++u)
      for (std::size_t v = 0; v < panel.variables(); ++v) {
        out << csv_field(panel.unit_ids[u]) << ',' << csv_field(panel.variable_names[v]);
        for (std::size_t t = 0; t < panel.length(); ++t) out << ',' << format_exact(panel.at(u, v, t));
        out << '\n';
      }
  }
}

CoordinateSet parse_coords(std::istream& in) {
  const auto rows = read_csv(in);
  if (rows.empty()) throw InputError("coordinates CSV is empty");
  const auto idx = header_index(rows[0]);
  const std::size_t c_unit = require_column(idx, "unit_id");
  const std::size_t c_lat = require_column(idx, "lat");
  const std::size_t c_lon = require_column(idx, "lon");
  CoordinateSet cs;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const auto where = row_ref(r);
    if (row.size() != rows[0].size()) throw InputError("wrong number of fields at " + where);
    cs.unit_ids.push_back(trim(row[c_unit]));
    cs.lat.push_back(parse_double(trim(row[c_lat]), where));
    cs.lon.push_back(parse_double(trim(row[c_lon]), where));
  }
  cs.validate();
  return cs;
}

CoordinateSet read_coords(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open coordinates file " + path.string());
  return parse_coords(in);
}

CoordinateSet align_coords(const CoordinateSet& coords, const std::vector<std::string>& unit_ids) {
  std::unordered_map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < coords.size(); ++i) where.emplace(coords.unit_ids[i], i);
  CoordinateSet out;
  for (const auto& id : unit_ids) {
    const auto it = where.find(id);
    if (it == where.end()) throw InputError("no coordinates for unit '" + id + "'");
    out.unit_ids.push_back(id);
    out.lat.push_back(coords.lat[it->second]);
    out.lon.push_back(coords.lon[it->second]);
  }
  return out;
}

void write_matrix(std::ostream& out, const DissimMatrix& d, const std::vector<std::string>& unit_ids) {
  if (unit_ids.size() != d.size()) throw InputError("write_matrix: unit id count does not match matrix");
  out << "unit_id";
  for (const auto& id : unit_ids) out << ',' << csv_field(id);
  out << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << csv_field(unit_ids[i]);
    for (std::size_t j = 0; j < d.size(); ++j) out << ',' << format_exact(d(i, j));
    out << '\n';
  }
}

DissimMatrix read_matrix(std::istream& in, const std::string& label, std::vector<std::string>* unit_ids) {
  const auto rows = read_csv(in);
  if (rows.empty()) throw InputError("matrix CSV is empty");
  const std::size_t n = rows[0].size() - 1;
  if (rows.size() != n + 1) throw InputError("matrix CSV is not square");
  std::vector<double> e;
  e.reserve(n * n);
  std::vector<std::string> ids;
  for (std::size_t r = 1; r <= n; ++r) {
    if (rows[r].size() != n + 1) throw InputError("wrong number of fields at " + row_ref(r));
    ids.push_back(trim(rows[r][0]));
    for (std::size_t c = 1; c <= n; ++c) e.push_back(parse_double(trim(rows[r][c]), row_ref(r)));
  }
  if (unit_ids) *unit_ids = std::move(ids);
  const double m = e.empty() ? 0.0 : *std::max_element(e.begin(), e.end());
  return DissimMatrix(label, n, std::move(e), m == 1.0);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << contents;
    if (!out) throw InputError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace geoclust::io
