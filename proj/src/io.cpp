#include "mqdecay/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "mqdecay/errors.hpp"

namespace mqdecay::io {

namespace {

using json = nlohmann::json;

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return in;
}

std::string read_all(const std::string& path) {
  std::ifstream in = open_input(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw FormatError("expected an integer for " + std::string(what) + ", got '" +
                      std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) throw FormatError("number formatting failed");
  return std::string(buffer, ptr);
}

double parse_number(std::string_view text) {
  const std::string t = trim(text);
  if (t == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (t == "inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw FormatError("expected a number, got '" + t + "'");
  }
  return value;
}

std::vector<Vec3> read_xyz(std::istream& in) {
  std::string line;
  while (std::getline(in, line) && trim(line).empty()) {
  }
  if (trim(line).empty()) throw FormatError("geometry file is empty");
  const int n = parse_int(trim(line), "spin count");
  if (n < 0) throw FormatError("negative spin count in geometry file");
  std::vector<Vec3> positions;
  positions.reserve(static_cast<std::size_t>(n));
  while (static_cast<int>(positions.size()) < n && std::getline(in, line)) {
    const std::string row = trim(line);
    if (row.empty()) continue;
    std::istringstream fields(row);
    std::string x, y, z, extra;
    if (!(fields >> x >> y >> z) || (fields >> extra)) {
      throw FormatError("geometry row must hold exactly 'x y z': '" + row + "'");
    }
    positions.push_back({parse_number(x), parse_number(y), parse_number(z)});
  }
  if (static_cast<int>(positions.size()) != n) {
    throw FormatError("geometry file declares " + std::to_string(n) + " spins but lists " +
                      std::to_string(positions.size()));
  }
  return positions;
}

std::vector<Vec3> read_xyz_file(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_xyz(in);
}

std::string coupling_set_to_json(const CouplingSet& c) {
  json j;
  j["n"] = c.size();
  j["units"] = std::string(to_string(c.units()));
  j["upper_triangle"] = c.upper_triangle();
  return j.dump(2);
}

CouplingSet coupling_set_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    const auto n = j.at("n").get<std::size_t>();
    const UnitsConvention units =
        j.contains("units") ? parse_units(j.at("units").get<std::string>())
                            : UnitsConvention::SI;
    const auto upper = j.at("upper_triangle").get<std::vector<double>>();
    return CouplingSet::from_upper_triangle(n, upper, units);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid coupling set JSON: ") + e.what());
  }
}

CouplingSet read_coupling_set_file(const std::string& path) {
  return coupling_set_from_json(read_all(path));
}

std::vector<RatePoint> read_rate_csv(std::istream& in) {
  const CsvTable table = read_csv(in);
  const std::vector<std::string> expected{"n", "M", "rate_per_s", "sigma_per_s"};
  if (table.header != expected) {
    throw FormatError("rate CSV header must be 'n,M,rate_per_s,sigma_per_s'");
  }
  std::vector<RatePoint> points;
  points.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    if (row.size() != 4) throw FormatError("rate CSV rows need four fields");
    RatePoint point{parse_int(row[0], "n"), parse_int(row[1], "M"), parse_number(row[2]),
                    parse_number(row[3])};
    try {
      point.validate();
    } catch (const DomainError& e) {
      throw FormatError(std::string("invalid rate CSV row: ") + e.what());
    }
    points.push_back(point);
  }
  return points;
}

std::vector<RatePoint> read_rate_csv_file(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_rate_csv(in);
}

void write_rate_csv(std::ostream& out, const std::vector<RatePoint>& points) {
  out << "n,M,rate_per_s,sigma_per_s\n";
  for (const auto& point : points) {
    out << point.n << ',' << point.M << ',' << format_number(point.rate) << ','
        << format_number(point.sigma) << '\n';
  }
}

std::string fit_results_to_json(const std::vector<FitResult>& fits) {
  json list = json::array();
  for (const auto& fit : fits) {
    list.push_back({{"n", fit.n},
                    {"p", fit.p},
                    {"M2", fit.M2},
                    {"chi2", fit.chi2},
                    {"n_points", fit.n_points},
                    {"converged", fit.converged}});
  }
  return list.dump(2);
}

std::vector<FitResult> fit_results_from_json(std::string_view text) {
  try {
    const json list = json::parse(text);
    std::vector<FitResult> fits;
    for (const auto& item : list) {
      FitResult fit;
      fit.n = item.at("n").get<int>();
      fit.p = item.at("p").get<double>();
      fit.M2 = item.at("M2").get<double>();
      fit.chi2 = item.at("chi2").get<double>();
      fit.n_points = item.at("n_points").get<std::size_t>();
      fit.converged = item.at("converged").get<bool>();
      fits.push_back(fit);
    }
    return fits;
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid fit result JSON: ") + e.what());
  }
}

void write_series_csv(std::ostream& out, const DecaySeries& series) {
  out << "t,S\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << format_number(series.times[i]) << ',' << format_number(series.values[i]) << '\n';
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) throw FormatError("CSV input has no header row");
  return table;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  auto write_row = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  write_row(table.header);
  for (const auto& row : table.rows) write_row(row);
}

}  // namespace mqdecay::io
