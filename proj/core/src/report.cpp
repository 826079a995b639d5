#include "cftower/report.hpp"

#include <algorithm>
#include <sstream>

#include "cftower/errors.hpp"

#ifndef CFTOWER_VERSION
#define CFTOWER_VERSION "unknown"
#endif

namespace cft {

namespace {

constexpr int kSchema = 1;

mpz_class integer_from(const json& j) {
  if (!j.is_string()) throw ParseError("expected a decimal string, got " + j.dump());
  mpz_class out;
  if (out.set_str(j.get<std::string>(), 10) != 0) throw ParseError("malformed integer " + j.dump());
  return out;
}

template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  } catch (const std::logic_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

json record_to_json(const FundamentalUnitRecord& r) {
  return {{"d", r.d}, {"unit", to_json(r.unit)}, {"norm", r.norm}, {"cf_period", r.cf_period}};
}

FundamentalUnitRecord record_from_json(const json& j) {
  FundamentalUnitRecord r;
  r.d = j.at("d").get<i64>();
  r.unit = quad_from_json(j.at("unit"));
  r.norm = j.at("norm").get<int>();
  r.cf_period = j.at("cf_period").get<unsigned>();
  return r;
}

RejectionStage stage_from_string(const std::string& s) {
  if (s == "step2") return RejectionStage::step2;
  if (s == "step4") return RejectionStage::step4;
  throw ParseError("unknown rejection stage " + s);
}

}  // namespace

std::string library_version() { return CFTOWER_VERSION; }

json tie_break_conventions() {
  return {
      {"beta", "smaller square root of p_i modulo p_j"},
      {"two_adic_root", "root congruent to 1 mod 4"},
      {"fundamental_unit", "greater than 1 at the embedding with sqrt d > 0"},
      {"u", "square root of e_ij or s*e_i*e_j*e_ij, positive at (+,+)"},
      {"psi_order", "(+s_p,+s_q), (+s_p,-s_q), (-s_p,+s_q), (-s_p,-s_q)"},
  };
}

json to_json(const QuadInt& x) { return {{"d", x.d()}, {"a", x.a().get_str()}, {"b", x.b().get_str()}}; }

json to_json(const BiquadElem& x) {
  json num = json::array();
  for (const auto& n : x.numerators()) num.push_back(n.get_str());
  return {{"p", x.p()}, {"q", x.q()}, {"num", num}, {"den", x.denominator().get_str()}};
}

json to_json(const mpq_class& x) { return {{"num", x.get_num().get_str()}, {"den", x.get_den().get_str()}}; }

json to_json(const UsefulPair& pair) {
  return {{"p_i", pair.p_i},
          {"p_j", pair.p_j},
          {"beta", pair.beta},
          {"e_prime", pair.e_prime},
          {"e_i", record_to_json(pair.e_i)},
          {"e_j", record_to_json(pair.e_j)},
          {"e_ij", record_to_json(pair.e_ij)},
          {"s", pair.s ? json(*pair.s) : json(nullptr)},
          {"u", to_json(pair.u)},
          {"quadruple", pair.quad},
          {"w", to_json(pair.w)},
          {"psi_values", pair.psi_values}};
}

json to_json(const PairRejection& rejection) {
  return {{"p_i", rejection.p_i}, {"p_j", rejection.p_j}, {"stage", to_string(rejection.stage)}};
}

json to_json(const ConstructionReport& report) {
  json S = json::array();
  for (const auto& pair : report.S) S.push_back(to_json(pair));
  json rejected = json::array();
  for (const auto& r : report.rejected) rejected.push_back(to_json(r));
  return {{"metadata",
           {{"schema", kSchema},
            {"version", library_version()},
            {"xmax", report.xmax},
            {"tie_break_conventions", tie_break_conventions()}}},
          {"pool", report.pool.primes},
          {"S", S},
          {"rejected", rejected},
          {"U", report.U},
          {"ell", report.ell},
          {"degree_exponent_bound", report.degree_exponent_bound},
          {"root_disc_radicand", report.root_disc_radicand.get_str()},
          {"growth", {{"r1", report.growth.r1}, {"r2", report.growth.r2}}}};
}

json to_json(const GeneratorManifest& manifest) {
  json kummer = json::array();
  for (const auto& k : manifest.kummer) kummer.push_back({{"p", k.p}, {"q", k.q}, {"w", to_json(k.w)}});
  return {{"radicands", manifest.radicands}, {"kummer", kummer}};
}

json to_json(const DensityReport& report) {
  return {{"p_i", report.p_i},         {"x", report.x},
          {"count", report.count},     {"expected", report.expected},
          {"tolerance", report.tolerance}, {"deviation", report.deviation()},
          {"within", report.within}};
}

json to_json(const NPrimeCertificate& certificate) {
  json nus = json::array();
  for (const auto& nu : certificate.nu_values) nus.push_back(to_json(nu));
  json C = json::array();
  for (const auto& c : certificate.C_set) C.push_back(to_json(c));
  json checks = json::array();
  for (const auto& c : certificate.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"witness", c.witness}});
  }
  json a_p = json::object();
  for (const auto& [p, a] : certificate.a_p) a_p[std::to_string(p)] = to_json(a);
  return {{"field", "Q(sqrt 7, sqrt 13)"},
          {"nu_values", nus},
          {"C_set", C},
          {"units",
           {{"eps7", to_json(certificate.eps7)},
            {"eps13", to_json(certificate.eps13)},
            {"eps91", to_json(certificate.eps91)},
            {"nu", to_json(certificate.nu)},
            {"gamma", to_json(certificate.gamma)}}},
          {"assumed_inputs", certificate.assumed_inputs},
          {"checks", checks},
          {"a_p", a_p},
          {"root_discriminant",
           {{"two_exponent", to_json(certificate.root_disc.two_exponent)},
            {"radicand", certificate.root_disc.radicand.get_str()},
            {"exact", "2^(" + certificate.root_disc.two_exponent.get_str() + ") * sqrt(" +
                          certificate.root_disc.radicand.get_str() + ")"},
            {"decimal", certificate.root_disc.decimal}}},
          {"passed", certificate.passed()}};
}

QuadInt quad_from_json(const json& j) {
  return guarded("QuadInt", [&] {
    return QuadInt(j.at("d").get<i64>(), integer_from(j.at("a")), integer_from(j.at("b")));
  });
}

BiquadElem biquad_from_json(const json& j) {
  return guarded("BiquadElem", [&] {
    const json& num = j.at("num");
    if (!num.is_array() || num.size() != 4) throw ParseError("BiquadElem: num must have 4 entries");
    std::array<mpz_class, 4> n;
    for (std::size_t k = 0; k < 4; ++k) n[k] = integer_from(num[k]);
    const mpz_class den = integer_from(j.at("den"));
    if (den <= 0) throw ParseError("BiquadElem: denominator must be positive");
    BiquadElem out(j.at("p").get<i64>(), j.at("q").get<i64>(), n, den);
    if (out.denominator() != den) throw ParseError("BiquadElem: coordinates not in lowest terms");
    return out;
  });
}

mpq_class rational_from_json(const json& j) {
  return guarded("rational", [&] {
    const mpz_class den = integer_from(j.at("den"));
    if (den == 0) throw ParseError("rational: zero denominator");
    mpq_class out(integer_from(j.at("num")), den);
    out.canonicalize();
    return out;
  });
}

UsefulPair useful_pair_from_json(const json& j) {
  return guarded("UsefulPair", [&] {
    UsefulPair pair;
    pair.p_i = j.at("p_i").get<u64>();
    pair.p_j = j.at("p_j").get<u64>();
    pair.beta = j.at("beta").get<u64>();
    pair.e_prime = j.at("e_prime").get<u64>();
    pair.e_i = record_from_json(j.at("e_i"));
    pair.e_j = record_from_json(j.at("e_j"));
    pair.e_ij = record_from_json(j.at("e_ij"));
    if (!j.at("s").is_null()) pair.s = j.at("s").get<int>();
    pair.u = biquad_from_json(j.at("u"));
    pair.quad = j.at("quadruple").get<std::array<int, 4>>();
    pair.w = biquad_from_json(j.at("w"));
    pair.psi_values = j.at("psi_values").get<std::array<unsigned, 4>>();
    return pair;
  });
}

PairRejection rejection_from_json(const json& j) {
  return guarded("PairRejection", [&] {
    return PairRejection{j.at("p_i").get<u64>(), j.at("p_j").get<u64>(),
                         stage_from_string(j.at("stage").get<std::string>())};
  });
}

ConstructionReport report_from_json(const json& j) {
  return guarded("ConstructionReport", [&] {
    const json& meta = j.at("metadata");
    if (meta.at("schema").get<int>() != kSchema) throw ParseError("unsupported report schema");
    ConstructionReport report;
    report.xmax = meta.at("xmax").get<u64>();
    report.pool.budget = report.xmax;
    report.pool.primes = j.at("pool").get<std::vector<u64>>();
    for (const auto& pair : j.at("S")) report.S.push_back(useful_pair_from_json(pair));
    for (const auto& r : j.at("rejected")) report.rejected.push_back(rejection_from_json(r));
    report.U = j.at("U").get<std::vector<u64>>();
    report.ell = j.at("ell").get<u64>();
    report.degree_exponent_bound = j.at("degree_exponent_bound").get<u64>();
    report.root_disc_radicand = integer_from(j.at("root_disc_radicand"));
    report.growth.r1 = j.at("growth").at("r1").get<double>();
    report.growth.r2 = j.at("growth").at("r2").get<double>();
    return report;
  });
}

GeneratorManifest manifest_from_json(const json& j) {
  return guarded("GeneratorManifest", [&] {
    GeneratorManifest manifest;
    manifest.radicands = j.at("radicands").get<std::vector<u64>>();
    for (const auto& k : j.at("kummer")) {
      manifest.kummer.push_back({k.at("p").get<u64>(), k.at("q").get<u64>(), biquad_from_json(k.at("w"))});
    }
    return manifest;
  });
}

DensityReport density_from_json(const json& j) {
  return guarded("DensityReport", [&] {
    DensityReport report;
    report.p_i = j.at("p_i").get<u64>();
    report.x = j.at("x").get<u64>();
    report.count = j.at("count").get<u64>();
    report.expected = j.at("expected").get<double>();
    report.tolerance = j.at("tolerance").get<double>();
    report.within = j.at("within").get<bool>();
    return report;
  });
}

std::string serialize_report(const ConstructionReport& report) { return to_json(report).dump(2) + "\n"; }

ConstructionReport parse_report(const std::string& text) {
  return report_from_json(guarded("report", [&] { return json::parse(text); }));
}

std::string serialize_manifest(const GeneratorManifest& manifest) { return to_json(manifest).dump(2) + "\n"; }

GeneratorManifest parse_manifest(const std::string& text) {
  return manifest_from_json(guarded("manifest", [&] { return json::parse(text); }));
}

std::string report_csv(const ConstructionReport& report) {
  struct Row {
    u64 p_i, p_j;
    std::string line;
  };
  std::vector<Row> rows;
  for (const auto& pair : report.S) {
    std::ostringstream line;
    line << pair.p_i << ',' << pair.p_j << ",accepted,," << pair.beta << ',' << pair.e_prime << ','
         << (pair.s ? std::to_string(*pair.s) : "") << ',';
    for (int x : pair.quad) line << x << ',';
    for (std::size_t k = 0; k < 4; ++k) line << pair.psi_values[k] << (k < 3 ? "," : "");
    rows.push_back({pair.p_i, pair.p_j, line.str()});
  }
  for (const auto& r : report.rejected) {
    std::ostringstream line;
    line << r.p_i << ',' << r.p_j << ",rejected," << to_string(r.stage) << ",,,,,,,,,,,";
    rows.push_back({r.p_i, r.p_j, line.str()});
  }
  std::sort(rows.begin(), rows.end(),
            [](const Row& x, const Row& y) { return std::tie(x.p_i, x.p_j) < std::tie(y.p_i, y.p_j); });
  std::string out = "p_i,p_j,outcome,stage,beta,e_prime,s,a,b,c,d,psi_0,psi_1,psi_2,psi_3\n";
  for (const auto& row : rows) out += row.line + "\n";
  return out;
}

}  // namespace cft
