#include <doctest.h>

#include <sstream>

#include "cftower/errors.hpp"
#include "cftower/report.hpp"

using namespace cft;

TEST_CASE("report round trip") {
  for (u64 x : {16, 100, 400}) {
    const ConstructionReport r = build_S(x);
    const std::string text = serialize_report(r);
    CHECK(parse_report(text) == r);
    CHECK(serialize_report(parse_report(text)) == text);
  }
  const json empty = to_json(build_S(16));
  CHECK(empty.at("S") == json::array());
  CHECK(empty.at("root_disc_radicand") == "1");
  CHECK(empty.at("metadata").at("xmax") == 16);
  CHECK(empty.at("metadata").contains("tie_break_conventions"));
}

TEST_CASE("exact values are decimal strings") {
  const ConstructionReport r = build_S(100);
  const json doc = to_json(r);
  REQUIRE_FALSE(r.S.empty());
  const json& w = doc.at("S").at(0).at("w");
  CHECK(w.at("den").is_string());
  for (const auto& n : w.at("num")) CHECK(n.is_string());
  mpz_class big;
  big.set_str(doc.at("S").at(0).at("e_ij").at("unit").at("a").get<std::string>(), 10);
  CHECK(big == r.S.front().e_ij.unit.a());
  CHECK(doc.at("root_disc_radicand") == r.root_disc_radicand.get_str());
  CHECK(rational_from_json(to_json(mpq_class(-7, 4))) == mpq_class(-7, 4));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_report("{"), ParseError);
  CHECK_THROWS_AS(parse_report("{}"), ParseError);
  json doc = to_json(build_S(100));
  json bad = doc;
  bad["root_disc_radicand"] = "12x";
  CHECK_THROWS_AS(report_from_json(bad), ParseError);
  bad = doc;
  bad["root_disc_radicand"] = 5;
  CHECK_THROWS_AS(report_from_json(bad), ParseError);
  bad = doc;
  bad["metadata"]["schema"] = 99;
  CHECK_THROWS_AS(report_from_json(bad), ParseError);
  bad = doc;
  bad["S"][0]["w"]["num"] = json::array({"1", "2"});
  CHECK_THROWS_AS(report_from_json(bad), ParseError);
  bad = doc;
  bad["S"][0]["w"]["p"] = 4;
  CHECK_THROWS_AS(report_from_json(bad), ParseError);
  bad = doc;
  bad["rejected"][0]["stage"] = "step3";
  CHECK_THROWS_AS(report_from_json(bad), ParseError);
  CHECK_THROWS_AS(biquad_from_json(json{{"p", 7}, {"q", 13}, {"num", {"2", "0", "0", "0"}}, {"den", "2"}}),
                  ParseError);
  CHECK_THROWS_AS(rational_from_json(json{{"num", "1"}, {"den", "0"}}), ParseError);
}

TEST_CASE("csv dump") {
  const ConstructionReport r = build_S(100);
  const std::string csv = report_csv(r);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "p_i,p_j,outcome,stage,beta,e_prime,s,a,b,c,d,psi_0,psi_1,psi_2,psi_3");
  std::size_t rows = 0, accepted = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 14);
    if (line.find(",accepted,") != std::string::npos) ++accepted;
  }
  CHECK(rows == r.S.size() + r.rejected.size());
  CHECK(rows == 20);
  CHECK(accepted == r.S.size());
}

TEST_CASE("manifest and density round trips") {
  const GeneratorManifest m = emit_generators(build_S(200));
  CHECK(parse_manifest(serialize_manifest(m)) == m);
  const DensityReport d = density_scan(17, 5000);
  CHECK(density_from_json(to_json(d)) == d);
  const json cert = to_json(build_nprime_certificate());
  CHECK(cert.at("passed") == true);
  CHECK(cert.at("root_discriminant").at("decimal") == "55.5756");
  CHECK(cert.at("root_discriminant").at("exact") == "2^(7/4) * sqrt(273)");
}
