#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cuspwind/gauss.hpp"
#include "cuspwind/ratelab.hpp"
#include "cuspwind/schottky.hpp"
#include "cuspwind/spectra.hpp"

namespace cuspwind {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kConfigSchemaVersion = 1;

/// Parsed group configuration document.
struct GroupConfig {
  int schema_version = kConfigSchemaVersion;
  std::vector<std::pair<MobiusMap, MobiusMap>> hyperbolic;
  std::pair<MobiusMap, MobiusMap> parabolic;
  std::string label;
};

/// Throws ConfigParse naming the offending field; matrix entries that are not
/// of disc-preserving shape raise NotDiscPreserving.
GroupConfig parse_group_config(const std::string& text);
GroupConfig read_group_config(const std::string& path);
GeneratorSet build_group(const GroupConfig& config);
std::string group_config_json(const GeneratorSet& G);

/// Grid mini-language lo:hi:count:{log|lin}.
std::vector<double> parse_grid(const std::string& spec);

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

namespace csv_schema {
inline const std::vector<std::string> spectrum = {"alpha",       "q",      "b",     "lyapunov",
                                                  "residual_p",  "residual_dq", "n_used", "L_used"};
inline const std::vector<std::string> spectrum_status = {"alpha", "status", "message"};
inline const std::vector<std::string> dirichlet = {"q", "K", "principal", "ratio"};
inline const std::vector<std::string> gauss_dim = {"n", "dim", "hensley_two_term", "abs_err"};
inline const std::vector<std::string> gauss_spectrum = {"alpha", "q", "b", "residual_p", "residual_dq"};
inline const std::vector<std::string> rate = {"alpha",           "q",          "b",
                                              "s_minus_b",       "q_alpha_ratio", "dirichlet_ratio",
                                              "sb_integral_ratio", "two_sided_below", "two_sided_above"};
}  // namespace csv_schema

using CsvRow = std::vector<std::string>;

/// UTF-8, LF line endings, header row, no quoting beyond what fields need.
std::string to_csv(const std::vector<std::string>& header, const std::vector<CsvRow>& rows);
void write_text(const std::string& path, const std::string& text);

std::vector<CsvRow> spectrum_rows(const std::vector<SpectrumPoint>& points);
/// Reads a spectrum CSV (header must match csv_schema::spectrum).
std::vector<SpectrumPoint> read_spectrum_csv(const std::string& path);
std::vector<CsvRow> rate_rows(const RateReport& report);
std::string rate_report_json(const RateReport& report);

struct RunManifest {
  std::string command;
  std::string config;
  std::map<std::string, std::string> flags;
  std::vector<std::string> outputs;
  double wall_seconds = 0.0;
  std::string to_json() const;
};

}  // namespace cuspwind
