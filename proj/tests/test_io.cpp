#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "cuspwind/error.hpp"
#include "cuspwind/io.hpp"

using namespace cuspwind;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

std::string what_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("CSV schemas are pinned") {
  CHECK(to_csv(csv_schema::spectrum, {}) == "alpha,q,b,lyapunov,residual_p,residual_dq,n_used,L_used\n");
  CHECK(to_csv(csv_schema::dirichlet, {}) == "q,K,principal,ratio\n");
  CHECK(to_csv(csv_schema::gauss_dim, {}) == "n,dim,hensley_two_term,abs_err\n");
  CHECK(to_csv(csv_schema::spectrum_status, {}) == "alpha,status,message\n");
  CHECK(to_csv(csv_schema::gauss_spectrum, {}) == "alpha,q,b,residual_p,residual_dq\n");
  CHECK(to_csv(csv_schema::rate, {}) ==
        "alpha,q,b,s_minus_b,q_alpha_ratio,dirichlet_ratio,sb_integral_ratio,two_sided_below,two_sided_above\n");
  CHECK(to_csv({"a", "b"}, {{"x,y", "say \"hi\""}}) == "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n");
}

TEST_CASE("doubles round-trip through their shortest form") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::exp(u(rng)) * (i % 2 ? 1 : -1);
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(512.0) == "512");
}

TEST_CASE("grid specs") {
  const auto g = parse_grid("1:512:10:log");
  REQUIRE(g.size() == 10);
  CHECK(g.front() == 1.0);
  CHECK(g.back() == 512.0);
  CHECK(g[1] / g[0] == doctest::Approx(g[9] / g[8]));
  CHECK(parse_grid("0:1:5:lin")[2] == doctest::Approx(0.5));
  CHECK(parse_grid("3:3:1:lin") == std::vector<double>{3.0});
  for (const char* bad : {"1:2:3", "1:2:0:log", "0:2:3:log", "2:1:3:lin", "a:2:3:lin", "1:2:3:cubic"}) {
    CHECK(kind_of([&] { parse_grid(bad); }) == ErrorKind::InvalidArgument);
  }
}

TEST_CASE("group configs round-trip and name bad fields") {
  const GeneratorSet G = example_group();
  const GroupConfig cfg = parse_group_config(group_config_json(G));
  CHECK(cfg.schema_version == 1);
  const GeneratorSet H = build_group(cfg);
  for (int e = 0; e < G.num_letters(); ++e) {
    CHECK(H.arc(e).center == doctest::Approx(G.arc(e).center).epsilon(1e-12));
    CHECK(H.arc(e).halfwidth == doctest::Approx(G.arc(e).halfwidth).epsilon(1e-12));
  }
  CHECK(kind_of([] { parse_group_config("{"); }) == ErrorKind::ConfigParse);
  CHECK(what_of([] { parse_group_config(R"({"hyperbolic": []})"); }).find("schema_version") != std::string::npos);
  CHECK(what_of([] { parse_group_config(R"({"schema_version": 2})"); }).find("schema_version") != std::string::npos);
  CHECK(what_of([] { parse_group_config(R"({"schema_version": 1, "hyperbolic": [{"h": 3}]})"); })
            .find("hyperbolic[0].h") != std::string::npos);
  CHECK(what_of([] {
          parse_group_config(
              R"({"schema_version": 1, "hyperbolic": [{"h": [[[2,0],[1,0]],[[1,0],[2,0]]],
                 "h_inv": [[[2,0],[-1,0]],[[-1,0],[2,0]]]}]})");
        }).find("parabolic") != std::string::npos);
  CHECK(kind_of([] { read_group_config("/nonexistent/cfg.json"); }) == ErrorKind::ConfigParse);
}

TEST_CASE("spectrum CSV round trip") {
  SpectrumPoint p;
  p.alpha = 16.0;
  p.q = 2.4635e-3;
  p.b = 0.67611;
  p.lyapunov = 5.886;
  p.residual_p = 1e-16;
  p.residual_dq = 3e-15;
  p.n_used = 12;
  p.L_used = 256;
  const auto path = (std::filesystem::temp_directory_path() / "cuspwind_io_test.csv").string();
  write_text(path, to_csv(csv_schema::spectrum, spectrum_rows({p, p})));
  const auto back = read_spectrum_csv(path);
  REQUIRE(back.size() == 2);
  CHECK(back[1].q == p.q);
  CHECK(back[1].residual_dq == p.residual_dq);
  CHECK(back[1].L_used == 256);
  write_text(path, "alpha,q\n1,2\n");
  CHECK(kind_of([&] { read_spectrum_csv(path); }) == ErrorKind::ConfigParse);
  std::remove(path.c_str());
}

TEST_CASE("manifest carries version and flags") {
  RunManifest m;
  m.command = "spectrum";
  m.flags["n"] = "6";
  const std::string j = m.to_json();
  CHECK(j.find("\"version\": \"0.1.0\"") != std::string::npos);
  CHECK(j.find("\"n\": \"6\"") != std::string::npos);
}
