// cuspwind: command-line driver for the dimension, spectrum and rate experiments.
#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cuspwind/error.hpp"
#include "cuspwind/gauss.hpp"
#include "cuspwind/io.hpp"
#include "cuspwind/pressure.hpp"
#include "cuspwind/ratelab.hpp"
#include "cuspwind/schottky.hpp"
#include "cuspwind/special.hpp"
#include "cuspwind/spectra.hpp"

using namespace cuspwind;

namespace {

struct GroupSource {
  std::string config;
  bool example = false;

  GeneratorSet load() const {
    if (!config.empty()) return build_group(read_group_config(config));
    return example_group();
  }
  std::string describe() const { return config.empty() ? "<builtin example>" : config; }
};

struct Numerics {
  int n = kDefaultWordLength;
  int L = kDefaultTruncation;
  double tol = 1e-12;
};

void add_group(CLI::App* cmd, GroupSource& src) {
  auto* cfg = cmd->add_option("--config", src.config, "group configuration (JSON)");
  auto* ex = cmd->add_flag("--example", src.example, "use the builtin example group");
  cfg->excludes(ex);
}

void add_numerics(CLI::App* cmd, Numerics& num) {
  cmd->add_option("--n", num.n, "word length for the pressure bracket")->capture_default_str();
  cmd->add_option("--L", num.L, "parabolic truncation")->capture_default_str();
  cmd->add_option("--tol", num.tol, "root tolerance")->capture_default_str();
}

void check_numerics(const Numerics& num) {
  if (num.n < 1) throw Error(ErrorKind::InvalidArgument, "--n must be >= 1");
  if (num.L < 1) throw Error(ErrorKind::InvalidArgument, "--L must be >= 1");
  if (!(num.tol > 0.0) || !std::isfinite(num.tol)) throw Error(ErrorKind::InvalidArgument, "--tol must be > 0");
}

void check_alphas(const std::vector<double>& alphas, double min_exclusive, const char* what) {
  for (double a : alphas) {
    if (!(a > min_exclusive)) {
      throw Error(ErrorKind::InvalidArgument,
                  std::string(what) + " entries must be > " + format_double(min_exclusive));
    }
  }
}

// Records flags and outputs; written next to the primary output, else to stderr.
class Manifest {
 public:
  Manifest(std::string command, std::string config) : start_(std::chrono::steady_clock::now()) {
    m_.command = std::move(command);
    m_.config = std::move(config);
  }
  void flag(const std::string& k, const std::string& v) { m_.flags[k] = v; }
  void flag(const std::string& k, double v) { m_.flags[k] = format_double(v); }
  void flag(const std::string& k, int v) { m_.flags[k] = std::to_string(v); }
  void numerics(const Numerics& num) {
    flag("n", num.n);
    flag("L", num.L);
    flag("tol", num.tol);
  }
  void output(const std::string& path) { m_.outputs.push_back(path); }

  void emit(const std::string& primary) {
    m_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (primary.empty()) {
      std::cerr << m_.to_json();
    } else {
      write_text(primary + ".manifest.json", m_.to_json());
    }
  }

 private:
  RunManifest m_;
  std::chrono::steady_clock::time_point start_;
};

// Writes to `path`, or stdout when empty.
void emit_text(const std::string& path, const std::string& text, Manifest& man) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_text(path, text);
    man.output(path);
  }
}

int cmd_dimension(const GroupSource& src, const Numerics& num) {
  check_numerics(num);
  Manifest man("dimension", src.describe());
  man.numerics(num);
  const GeneratorSet G = src.load();
  const DimensionResult d = bowen_dimension(G, num.tol, num.n, num.L);
  const double half = 0.5 * (d.upper - d.lower);
  std::printf("s = %s +/- %s\n", format_double(d.s).c_str(), format_double(half).c_str());
  std::printf("bracket [%s, %s] n=%d L=%d\n", format_double(d.lower).c_str(), format_double(d.upper).c_str(),
              d.n_used, d.L_used);
  man.emit("");
  return 0;
}

int cmd_spectrum(const GroupSource& src, const Numerics& num, const std::string& grid_spec, const std::string& out) {
  check_numerics(num);
  const std::vector<double> alphas = parse_grid(grid_spec);
  check_alphas(alphas, 0.0, "--alpha-grid");
  Manifest man("spectrum", src.describe());
  man.numerics(num);
  man.flag("alpha_grid", grid_spec);
  const GeneratorSet G = src.load();
  const std::vector<GridEntry> entries = spectrum_grid(G, alphas, num.tol, num.n, num.L);

  std::vector<SpectrumPoint> ok;
  std::vector<CsvRow> status;
  std::optional<ErrorKind> first_error;
  for (const GridEntry& e : entries) {
    if (e.point) {
      ok.push_back(*e.point);
      status.push_back({format_double(e.alpha), "ok", ""});
    } else {
      if (!first_error) first_error = e.error;
      status.push_back({format_double(e.alpha), std::string(to_string(*e.error)), e.message});
      std::cerr << "alpha=" << format_double(e.alpha) << " failed: " << e.message << "\n";
    }
  }
  emit_text(out, to_csv(csv_schema::spectrum, spectrum_rows(ok)), man);
  if (!out.empty()) {
    write_text(out + ".status.csv", to_csv(csv_schema::spectrum_status, status));
    man.output(out + ".status.csv");
  }
  man.emit(out);
  if (first_error && 5 * ok.size() < 4 * entries.size()) return exit_code(*first_error);
  return 0;
}

struct RateArgs {
  std::string spectrum_csv;
  std::string grid = "16:512:10:log";
  std::optional<double> s;
  std::string out;
  std::string csv;
};

int cmd_rate(const GroupSource& src, const Numerics& num, const RateArgs& args) {
  check_numerics(num);
  if (args.s && !(*args.s > 0.5 && *args.s < 1.0)) throw Error(ErrorKind::InvalidArgument, "--s must lie in (1/2, 1)");
  std::vector<double> alphas;
  if (args.spectrum_csv.empty()) {
    alphas = parse_grid(args.grid);
    check_alphas(alphas, 0.0, "--alpha-grid");
  }
  Manifest man("rate", args.spectrum_csv.empty() ? src.describe() : args.spectrum_csv);
  man.numerics(num);
  if (args.spectrum_csv.empty()) man.flag("alpha_grid", args.grid);
  if (args.s) man.flag("s", *args.s);

  std::vector<SpectrumPoint> grid;
  double s = 0.0;
  if (!args.spectrum_csv.empty()) {
    grid = read_spectrum_csv(args.spectrum_csv);
    s = args.s ? *args.s : bowen_dimension(src.load(), 1e-12, num.n, num.L).s;
  } else {
    const GeneratorSet G = src.load();
    const TransferEngine engine = TransferEngine::schottky(G, Alphabet::Full, num.L);
    s = args.s ? *args.s : bowen_dimension(engine, 1e-12, num.n).s;
    for (const GridEntry& e : spectrum_grid(engine, alphas, std::max(num.tol, 1e-9), num.n)) {
      if (e.point) {
        grid.push_back(*e.point);
      } else {
        std::cerr << "alpha=" << format_double(e.alpha) << " failed: " << e.message << "\n";
      }
    }
  }
  man.flag("s_used", s);

  const RateReport report = rate_fit(grid, s, false);
  emit_text(args.out, rate_report_json(report), man);
  const std::string csv_path = !args.csv.empty() ? args.csv : (args.out.empty() ? "" : args.out + ".csv");
  if (!csv_path.empty()) {
    write_text(csv_path, to_csv(csv_schema::rate, rate_rows(report)));
    man.output(csv_path);
  }
  man.emit(args.out);
  std::cerr << "x* = " << format_double(report.fitted_exponent)
            << ", critical = " << format_double(report.critical_exponent)
            << ", relative error = " << format_double(report.relative_error) << "\n";
  if (!report.stable) {
    std::cerr << "error: " << to_string(ErrorKind::FitUnstable) << ": " << report.instability << "\n";
    return exit_code(ErrorKind::FitUnstable);
  }
  return 0;
}

int cmd_dirichlet(double b, const std::string& q_spec, const std::string& out) {
  if (!(b > 0.5 && b < 1.0)) throw Error(ErrorKind::InvalidArgument, "--b must lie in (1/2, 1)");
  const std::vector<double> qs = parse_grid(q_spec);
  check_alphas(qs, 0.0, "--q-grid");
  Manifest man("dirichlet", "");
  man.flag("b", b);
  man.flag("q_grid", q_spec);
  const ComparabilityTable table = comparability_check(b, qs);
  std::vector<CsvRow> rows;
  for (const ComparabilityRow& r : table.rows) {
    rows.push_back({format_double(r.q), format_double(r.K), format_double(r.leading), format_double(r.ratio)});
    if (std::abs(r.ratio - 1.0) > 0.2) {
      std::cerr << "slow convergence: q=" << format_double(r.q) << " ratio=" << format_double(r.ratio) << "\n";
    }
  }
  emit_text(out, to_csv(csv_schema::dirichlet, rows), man);
  man.emit(out);
  return 0;
}

// "K" or "a..b".
std::pair<int, int> parse_digit_range(const std::string& spec) {
  auto num = [&](const std::string& s) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(s, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != s.size() || v < 1) throw Error(ErrorKind::InvalidArgument, "--n expects K or a..b with K >= 1");
    return v;
  };
  const auto dots = spec.find("..");
  if (dots == std::string::npos) {
    const int k = num(spec);
    return {k, k};
  }
  const int a = num(spec.substr(0, dots)), b = num(spec.substr(dots + 2));
  if (b < a) throw Error(ErrorKind::InvalidArgument, "--n range is empty");
  return {a, b};
}

int cmd_gauss_dim(const std::string& range, double tol, const std::string& out) {
  const auto [lo, hi] = parse_digit_range(range);
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "--tol must be > 0");
  Manifest man("gauss dim", "");
  man.flag("n", range);
  man.flag("tol", tol);
  std::vector<CsvRow> rows;
  for (int k = lo; k <= hi; ++k) {
    const double d = gauss_dim_restricted(k, tol);
    const double h = hensley_two_term(k);
    rows.push_back({std::to_string(k), format_double(d), format_double(h), format_double(std::abs(d - h))});
  }
  emit_text(out, to_csv(csv_schema::gauss_dim, rows), man);
  man.emit(out);
  return 0;
}

int cmd_gauss_spectrum(const Numerics& num, const std::string& grid_spec, const std::string& out) {
  check_numerics(num);
  const std::vector<double> alphas = parse_grid(grid_spec);
  check_alphas(alphas, 1.0, "--alpha-grid");
  Manifest man("gauss spectrum", "");
  man.numerics(num);
  man.flag("alpha_grid", grid_spec);
  std::vector<CsvRow> rows;
  for (double a : alphas) {
    const SpectrumPoint p = gauss_spectrum(a, num.tol, num.n, num.L);
    rows.push_back({format_double(p.alpha), format_double(p.q), format_double(p.b), format_double(p.residual_p),
                    format_double(p.residual_dq)});
  }
  emit_text(out, to_csv(csv_schema::gauss_spectrum, rows), man);
  man.emit(out);
  return 0;
}

int cmd_gauss_rate(const Numerics& num, const std::string& grid_spec, const std::string& out) {
  check_numerics(num);
  const std::vector<double> alphas = parse_grid(grid_spec);
  check_alphas(alphas, 1.0, "--alpha-grid");
  Manifest man("gauss rate", "");
  man.numerics(num);
  man.flag("alpha_grid", grid_spec);
  const GaussRateReport r = gauss_rate_check(alphas, num.tol, num.n, num.L);
  std::string text = "base=" + format_double(r.base) + "\nloglinear_r2=" + format_double(r.loglinear_r2) +
                     "\npowerlaw_r2=" + format_double(r.powerlaw_r2) +
                     "\nscaled_max_min=" + format_double(r.scaled_max_min) + "\n";
  emit_text(out, text, man);
  man.emit(out);
  return 0;
}

int cmd_encode(const GroupSource& src, double theta, int depth) {
  if (depth < 1) throw Error(ErrorKind::InvalidArgument, "--depth must be >= 1");
  if (!std::isfinite(theta)) throw Error(ErrorKind::InvalidArgument, "--theta must be finite");
  Manifest man("encode", src.describe());
  man.flag("theta", theta);
  man.flag("depth", depth);
  const GeneratorSet G = src.load();
  const Word w = encode(G, theta, depth);
  std::printf("word: %s\n", to_string(G, w).c_str());
  std::printf("a1:");
  for (const Symbol& s : w) std::printf(" %lld", static_cast<long long>(s.a1()));
  std::printf("\n");
  man.emit("");
  return 0;
}

int cmd_config(const GroupSource& src, const std::string& out) {
  Manifest man("config", src.describe());
  const GeneratorSet G = src.load();
  emit_text(out, group_config_json(G), man);
  man.emit(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cusp winding spectra of generalized Schottky groups"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::function<int()> run;
  GroupSource src;
  Numerics num;

  auto* dim = app.add_subcommand("dimension", "Hausdorff dimension s of the limit set");
  add_group(dim, src);
  add_numerics(dim, num);
  dim->callback([&] { run = [&] { return cmd_dimension(src, num); }; });

  std::string grid = "1:512:20:log", out;
  Numerics snum{kDefaultWordLength, kDefaultTruncation, 1e-6};
  auto* spec = app.add_subcommand("spectrum", "cusp winding spectrum b(alpha) on a grid");
  add_group(spec, src);
  add_numerics(spec, snum);
  spec->add_option("--alpha-grid", grid, "lo:hi:count:{log|lin}")->capture_default_str();
  spec->add_option("--out", out, "CSV output path (stdout if omitted)");
  spec->callback([&] { run = [&] { return cmd_spectrum(src, snum, grid, out); }; });

  RateArgs rargs;
  double s_flag = 0.0;
  Numerics rnum{kDefaultWordLength, kDefaultTruncation, 1e-6};
  auto* rate = app.add_subcommand("rate", "fit the approach rate of b(alpha) to s");
  add_group(rate, src);
  add_numerics(rate, rnum);
  rate->add_option("--alpha-grid", rargs.grid, "grid when computing the spectrum")->capture_default_str();
  rate->add_option("--spectrum-csv", rargs.spectrum_csv, "precomputed spectrum CSV");
  auto* s_opt = rate->add_option("--s", s_flag, "dimension s (computed from the group if omitted)");
  rate->add_option("--out", rargs.out, "report path (stdout if omitted)");
  rate->add_option("--csv", rargs.csv, "rate table CSV (default <out>.csv)");
  rate->callback([&] {
    if (s_opt->count() > 0) rargs.s = s_flag;
    run = [&] { return cmd_rate(src, rnum, rargs); };
  });

  double b = 0.75;
  std::string q_grid = "1e-6:1e-1:6:log", dout;
  auto* dir = app.add_subcommand("dirichlet", "Dirichlet-type sum against its Mellin principal term");
  dir->add_option("--b", b, "exponent b in (1/2, 1)")->capture_default_str();
  dir->add_option("--q-grid", q_grid, "lo:hi:count:{log|lin}")->capture_default_str();
  dir->add_option("--out", dout, "CSV output path");
  dir->callback([&] { run = [&] { return cmd_dirichlet(b, q_grid, dout); }; });

  auto* gauss = app.add_subcommand("gauss", "continued-fraction comparison case");
  gauss->require_subcommand(1);
  std::string range = "1..50", gout;
  double gtol = 1e-12;
  auto* gdim = gauss->add_subcommand("dim", "dimension of bounded-digit sets");
  gdim->add_option("--n", range, "K or a..b")->capture_default_str();
  gdim->add_option("--tol", gtol)->capture_default_str();
  gdim->add_option("--out", gout);
  gdim->callback([&] { run = [&] { return cmd_gauss_dim(range, gtol, gout); }; });

  std::string ggrid = "2:12:11:lin", grate_grid = "4:12:9:lin";
  Numerics gnum{kDefaultWordLength, kDefaultTruncation, 1e-6};
  auto* gspec = gauss->add_subcommand("spectrum", "digit-average spectrum");
  add_numerics(gspec, gnum);
  gspec->add_option("--alpha-grid", ggrid)->capture_default_str();
  gspec->add_option("--out", gout);
  gspec->callback([&] { run = [&] { return cmd_gauss_spectrum(gnum, ggrid, gout); }; });
  auto* grate = gauss->add_subcommand("rate", "exponential rate fit of 1 - b(alpha)");
  add_numerics(grate, gnum);
  grate->add_option("--alpha-grid", grate_grid)->capture_default_str();
  grate->add_option("--out", gout);
  grate->callback([&] { run = [&] { return cmd_gauss_rate(gnum, grate_grid, gout); }; });

  double theta = 0.0;
  int depth = 8;
  auto* enc = app.add_subcommand("encode", "symbolic coding of a boundary point");
  add_group(enc, src);
  enc->add_option("--theta", theta, "boundary angle")->required();
  enc->add_option("--depth", depth)->capture_default_str();
  enc->callback([&] { run = [&] { return cmd_encode(src, theta, depth); }; });

  std::string cout_path;
  auto* cfgcmd = app.add_subcommand("config", "validate a group and print it as a configuration document");
  add_group(cfgcmd, src);
  cfgcmd->add_option("--out", cout_path);
  cfgcmd->callback([&] { run = [&] { return cmd_config(src, cout_path); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    return run();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
