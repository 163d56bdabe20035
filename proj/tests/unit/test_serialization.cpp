#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <sstream>

#include "sgjms/errors.hpp"
#include "sgjms/serialization.hpp"

using namespace sgjms;

namespace {

std::string random_field(std::mt19937_64& rng) {
  static const std::string alphabet = "ab,\"\r\n x1;'";
  std::uniform_int_distribution<int> len(0, 8);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string s;
  for (int i = len(rng); i > 0; --i) s += alphabet[pick(rng)];
  return s;
}

}  // namespace

TEST_SUITE("serialization") {

TEST_CASE("zonal function JSON round trip is exact") {
  const auto sp = SpectralSpace::make(SphereParams::make(5, 2), 10);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 1.0);
  ZonalFunction u = sp.zero();
  for (int k = 0; k <= 10; ++k) u.coeffs(k) = normal(rng) * std::pow(10.0, k - 5);
  const Json j = to_json(u);
  CHECK(j.at("n") == 5);
  CHECK(j.at("m") == 2);
  CHECK(j.at("K") == 10);
  const ZonalFunction back = zonal_function_from_json(Json::parse(j.dump()));
  CHECK(back.params == u.params);
  CHECK(back.coeffs == u.coeffs);

  Json broken = j;
  broken["K"] = 9;
  CHECK_THROWS_AS(zonal_function_from_json(broken), MismatchError);
  broken = j;
  broken["n"] = 4;
  CHECK_THROWS_AS(zonal_function_from_json(broken), DomainError);
}

TEST_CASE("spectra JSON round trip") {
  const SphereParams p = SphereParams::make(7, 3);
  const GjmsSpectrum g = gjms_eigenvalues(p, 12);
  const GjmsSpectrum g2 = gjms_spectrum_from_json(Json::parse(to_json(g).dump()));
  CHECK(g2.lambda == g.lambda);
  const KernelSpectrum k = funk_hecke_spectrum(p, 12);
  const Json jk = to_json(k);
  CHECK(jk.begin().key() == "n");
  CHECK(jk.contains("mu"));
  const KernelSpectrum k2 = kernel_spectrum_from_json(Json::parse(jk.dump()));
  CHECK(k2.mu == k.mu);
  CHECK(k2.params == k.params);
}

TEST_CASE("result JSON carries the diagnostics") {
  const auto sp = SpectralSpace::make(SphereParams::make(3, 1), 8);
  const Nonlinearity f = Nonlinearity::power(3.0);
  const SolveResult r = solve_newton(sp, f, sp.constant(std::sqrt(0.75)));
  const Json j = to_json(r);
  CHECK(j.at("classification") == "constant");
  CHECK(j.at("converged") == true);
  CHECK(zonal_function_from_json(j.at("solution")).coeffs == r.solution.coeffs);

  const ProbeReport pr = uniqueness_probe(sp, f, 3, 2);
  const Json jp = to_json(pr);
  CHECK(jp.at("trials") == 3);
  CHECK(jp.at("outcomes").size() == 3);
  CHECK(jp.at("counterexamples").empty());
}

TEST_CASE("number formatting round trips") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-300.0, 300.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::pow(10.0, u(rng)) * (i % 2 ? -1.0 : 1.0);
    CHECK(std::stod(format_number(x)) == x);
  }
  CHECK(format_number(0.0) == "0");
  // stod reports ERANGE for subnormals; strtod still parses them
  const std::string tiny = format_number(std::numeric_limits<double>::denorm_min());
  CHECK(std::strtod(tiny.c_str(), nullptr) == std::numeric_limits<double>::denorm_min());
}

TEST_CASE("csv escaping") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
  CHECK(csv_escape("") == "");
}

TEST_CASE("csv tables round trip") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dims(1, 6);
  for (int trial = 0; trial < 300; ++trial) {
    CsvTable t;
    const int cols = dims(rng);
    for (int c = 0; c < cols; ++c) t.header.push_back("c" + std::to_string(c) + random_field(rng));
    const int rows = dims(rng) - 1;
    for (int r = 0; r < rows; ++r) {
      CsvRow row;
      for (int c = 0; c < cols; ++c) row.push_back(random_field(rng));
      t.rows.push_back(row);
    }
    const CsvTable back = parse_csv(to_csv(t));
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
  }
}

TEST_CASE("csv parser accepts LF and rejects malformed input") {
  const CsvTable t = parse_csv("a,b\n1,2\n3,\"x,y\"\n");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1][1] == "x,y");
  CHECK(parse_csv("a,b\r\n").rows.empty());
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), DomainError);
  CHECK_THROWS_AS(parse_csv("a,b\n\"1,2\n"), DomainError);
}

TEST_CASE("profiles and traces as csv") {
  const SphereParams p = SphereParams::make(3, 1);
  RadialProfile prof{p, {0.0, 0.5, 1.0}, {1.0, 0.8, 0.5}};
  const CsvTable t = to_csv_table(prof);
  CHECK(t.header == CsvRow{"r", "u"});
  REQUIRE(t.rows.size() == 3);
  CHECK(std::stod(t.rows[1][1]) == 0.8);

  std::vector<TracePoint> trace{{0, 3.5, 0.25}, {1, 3.25, 1e-12}};
  const CsvTable tt = parse_csv(to_csv(to_csv_table(trace)));
  CHECK(tt.header == CsvRow{"iter", "value", "grad_norm"});
  CHECK(std::stod(tt.rows[1][2]) == 1e-12);

  std::ostringstream os;
  write_csv(os, CsvTable{{"k", "lambda"}, {}});
  CHECK(os.str() == "k,lambda\r\n");
}

}
