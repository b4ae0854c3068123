// io.hpp - file formats: XYZ geometry, CouplingSet JSON, rate CSV, FitResult
// JSON and shortest round-trip number formatting for CSV output.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mqdecay/couplings.hpp"
#include "mqdecay/fitting.hpp"
#include "mqdecay/series.hpp"

namespace mqdecay::io {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_number(double value);
/// Inverse of format_number; also accepts "nan", "inf" and "-inf".
double parse_number(std::string_view text);

/// First line n, then n lines "x y z" in meters. Axis and gamma come from
/// the caller.
std::vector<Vec3> read_xyz(std::istream& in);
std::vector<Vec3> read_xyz_file(const std::string& path);

/// {"n": n, "units": "SI", "upper_triangle": [b01, b02, ..., b(n-2)(n-1)]}
std::string coupling_set_to_json(const CouplingSet& c);
CouplingSet coupling_set_from_json(std::string_view text);
CouplingSet read_coupling_set_file(const std::string& path);

/// Header "n,M,rate_per_s,sigma_per_s" followed by one row per point.
std::vector<RatePoint> read_rate_csv(std::istream& in);
std::vector<RatePoint> read_rate_csv_file(const std::string& path);
void write_rate_csv(std::ostream& out, const std::vector<RatePoint>& points);

std::string fit_results_to_json(const std::vector<FitResult>& fits);
std::vector<FitResult> fit_results_from_json(std::string_view text);

/// Header "t,S" then one row per sample.
void write_series_csv(std::ostream& out, const DecaySeries& series);

/// Minimal CSV table used for round-trip checks of every CLI output.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(std::istream& in);
void write_csv(std::ostream& out, const CsvTable& table);

}  // namespace mqdecay::io
