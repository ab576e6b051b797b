#include "cuspwind/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cuspwind/error.hpp"

namespace cuspwind {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::ConfigParse, "field '" + field + "': " + why);
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) bad(path + key, "missing");
  return obj.at(key);
}

cplx parse_complex(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    bad(field, "expected [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

MobiusMap parse_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 ||
      j[1].size() != 2) {
    bad(field, "expected a 2x2 matrix of [re, im] entries");
  }
  return MobiusMap::from_matrix(parse_complex(j[0][0], field + "[0][0]"), parse_complex(j[0][1], field + "[0][1]"),
                                parse_complex(j[1][0], field + "[1][0]"), parse_complex(j[1][1], field + "[1][1]"));
}

json matrix_json(const MobiusMap& g) {
  auto c = [](cplx z) { return json::array({z.real(), z.imag()}); };
  return json::array({json::array({c(g.a()), c(g.b())}), json::array({c(std::conj(g.b())), c(std::conj(g.a()))})});
}

json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

json comparability_json(const Comparability& c) {
  return {{"alpha", c.alpha}, {"ratio", c.ratio}, {"Z_full", c.Z_full}, {"Z_half", c.Z_half},
          {"stable", c.stable}};
}

}  // namespace

GroupConfig parse_group_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigParse, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad("<root>", "expected an object");
  GroupConfig cfg;
  const json& ver = member(doc, "schema_version", "");
  if (!ver.is_number_integer()) bad("schema_version", "expected an integer");
  cfg.schema_version = ver.get<int>();
  if (cfg.schema_version != kConfigSchemaVersion) {
    bad("schema_version", "unsupported version " + std::to_string(cfg.schema_version));
  }
  const json& hyp = member(doc, "hyperbolic", "");
  if (!hyp.is_array() || hyp.empty()) bad("hyperbolic", "expected a non-empty array");
  for (std::size_t i = 0; i < hyp.size(); ++i) {
    const std::string p = "hyperbolic[" + std::to_string(i) + "].";
    MobiusMap h = parse_matrix(member(hyp[i], "h", p), p + "h");
    MobiusMap h_inv = parse_matrix(member(hyp[i], "h_inv", p), p + "h_inv");
    cfg.hyperbolic.emplace_back(h, h_inv);
  }
  const json& par = member(doc, "parabolic", "");
  MobiusMap g = parse_matrix(member(par, "gamma", "parabolic."), "parabolic.gamma");
  MobiusMap g_inv = parse_matrix(member(par, "gamma_inv", "parabolic."), "parabolic.gamma_inv");
  cfg.parabolic = {g, g_inv};
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) bad("label", "expected a string");
    cfg.label = doc["label"].get<std::string>();
  }
  return cfg;
}

GroupConfig read_group_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigParse, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_group_config(ss.str());
}

GeneratorSet build_group(const GroupConfig& config) {
  GeneratorSet G = validate_generators(config.hyperbolic, config.parabolic);
  G.set_label(config.label);
  return G;
}

std::string group_config_json(const GeneratorSet& G) {
  json doc;
  doc["schema_version"] = kConfigSchemaVersion;
  doc["label"] = G.label();
  json hyp = json::array();
  for (const auto& [h, hi] : G.hyperbolic_pairs()) hyp.push_back({{"h", matrix_json(h)}, {"h_inv", matrix_json(hi)}});
  doc["hyperbolic"] = hyp;
  const auto [g, gi] = G.parabolic_pair();
  doc["parabolic"] = {{"gamma", matrix_json(g)}, {"gamma_inv", matrix_json(gi)}};
  return doc.dump(2) + "\n";
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  auto fail = [&](const std::string& why) -> std::vector<double> {
    throw Error(ErrorKind::InvalidArgument, "grid '" + spec + "': " + why);
  };
  if (parts.size() != 4) return fail("expected lo:hi:count:{log|lin}");
  auto num = [&](const std::string& s, const char* what) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v)) {
      fail(std::string("bad ") + what);
    }
    return v;
  };
  const double lo = num(parts[0], "lo"), hi = num(parts[1], "hi");
  int count = 0;
  const auto rc = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), count);
  if (rc.ec != std::errc() || rc.ptr != parts[2].data() + parts[2].size() || count < 1) fail("bad count");
  const bool log = parts[3] == "log";
  if (!log && parts[3] != "lin") fail("spacing must be log or lin");
  if (log && !(lo > 0.0 && hi > 0.0)) fail("log spacing needs positive bounds");
  if (count > 1 && !(hi > lo)) fail("hi must exceed lo");
  if (count == 1 && hi != lo) fail("a single point needs lo == hi");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out.push_back(log ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string to_csv(const std::vector<std::string>& header, const std::vector<CsvRow>& rows) {
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  std::string out;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += field(r[i]);
    }
    out += '\n';
  };
  line(header);
  for (const CsvRow& r : rows) line(r);
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << text;
}

std::vector<CsvRow> spectrum_rows(const std::vector<SpectrumPoint>& points) {
  std::vector<CsvRow> rows;
  for (const SpectrumPoint& p : points) {
    rows.push_back({format_double(p.alpha), format_double(p.q), format_double(p.b), format_double(p.lyapunov),
                    format_double(p.residual_p), format_double(p.residual_dq), std::to_string(p.n_used),
                    std::to_string(p.L_used)});
  }
  return rows;
}

std::vector<SpectrumPoint> read_spectrum_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigParse, "cannot open spectrum CSV '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::ConfigParse, "empty spectrum CSV");
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(item);
    return out;
  };
  if (split(line) != csv_schema::spectrum) throw Error(ErrorKind::ConfigParse, "spectrum CSV header mismatch");
  std::vector<SpectrumPoint> pts;
  for (int lineno = 2; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != csv_schema::spectrum.size()) {
      throw Error(ErrorKind::ConfigParse, "spectrum CSV line " + std::to_string(lineno) + ": wrong field count");
    }
    auto num = [&](std::size_t i) {
      double v = 0.0;
      const auto r = std::from_chars(f[i].data(), f[i].data() + f[i].size(), v);
      if (r.ec != std::errc() || r.ptr != f[i].data() + f[i].size()) {
        throw Error(ErrorKind::ConfigParse, "spectrum CSV line " + std::to_string(lineno) + ": bad field '" +
                                                csv_schema::spectrum[i] + "'");
      }
      return v;
    };
    SpectrumPoint p;
    p.alpha = num(0);
    p.q = num(1);
    p.b = num(2);
    p.lyapunov = num(3);
    p.residual_p = num(4);
    p.residual_dq = num(5);
    p.n_used = static_cast<int>(num(6));
    p.L_used = static_cast<int>(num(7));
    pts.push_back(p);
  }
  return pts;
}

std::vector<CsvRow> rate_rows(const RateReport& report) {
  auto lookup = [](const Comparability& c, double alpha) -> std::string {
    for (std::size_t i = 0; i < c.alpha.size(); ++i) {
      if (c.alpha[i] == alpha) return format_double(c.ratio[i]);
    }
    return "";
  };
  std::vector<CsvRow> rows;
  for (const SpectrumPoint& p : report.grid) {
    std::string below, above;
    for (const TwoSidedRow& r : report.two_sided) {
      if (r.alpha == p.alpha) {
        below = format_double(r.below);
        above = format_double(r.above);
      }
    }
    rows.push_back({format_double(p.alpha), format_double(p.q), format_double(p.b), format_double(report.s - p.b),
                    lookup(report.q_alpha, p.alpha), lookup(report.dirichlet, p.alpha),
                    lookup(report.sb_integral.table, p.alpha), below, above});
  }
  return rows;
}

std::string rate_report_json(const RateReport& r) {
  json doc;
  doc["s"] = number(r.s);
  doc["fitted_exponent"] = number(r.fitted_exponent);
  doc["fit_r2"] = number(r.fit_r2);
  doc["loglinear_r2"] = number(r.loglinear_r2);
  doc["critical_exponent"] = number(r.critical_exponent);
  doc["relative_error"] = number(r.relative_error);
  doc["leave_last_out_exponent"] = number(r.leave_last_out_exponent);
  doc["stable"] = r.stable;
  doc["instability"] = r.instability;
  doc["q_slope"] = number(r.q_slope);
  doc["q_slope_expected"] = number(r.q_slope_expected);
  doc["Z"] = comparability_json(r.q_alpha);
  doc["B"] = comparability_json(r.sb_integral.table);
  doc["B_tail_fraction"] = r.sb_integral.tail_fraction;
  doc["B_low_confidence"] = r.sb_integral.low_confidence;
  doc["C"] = comparability_json(r.dirichlet);
  json two = json::array();
  for (const TwoSidedRow& t : r.two_sided) two.push_back({{"alpha", t.alpha}, {"below", t.below}, {"above", t.above}});
  doc["two_sided"] = {{"x_below", r.x_below},
                      {"x_above", r.x_above},
                      {"below_decreasing", r.below_decreasing},
                      {"above_increasing", r.above_increasing},
                      {"rows", two}};
  json grid = json::array();
  for (const SpectrumPoint& p : r.grid) {
    grid.push_back({{"alpha", p.alpha}, {"q", p.q}, {"b", p.b}, {"lyapunov", p.lyapunov}});
  }
  doc["grid"] = grid;
  return doc.dump(2) + "\n";
}

std::string RunManifest::to_json() const {
  json doc;
  doc["command"] = command;
  doc["config"] = config;
  doc["flags"] = flags;
  doc["outputs"] = outputs;
  doc["version"] = kVersion;
  doc["wall_seconds"] = wall_seconds;
  return doc.dump(2) + "\n";
}

}  // namespace cuspwind
