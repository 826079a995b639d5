#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cftower/chebotarev.hpp"
#include "cftower/errors.hpp"
#include "cftower/nprime.hpp"
#include "cftower/report.hpp"

namespace cft::cli {

namespace {

void write_output(const RunConfig& config, std::ostream& out, const std::string& text) {
  if (config.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.out_path, std::ios::binary);
  if (!file) throw DomainError("cannot open " + config.out_path + " for writing");
  file << text;
}

}  // namespace

void validate(const RunConfig& config) {
  if (config.command != "construct" && config.command != "pair" && config.command != "density" &&
      config.command != "verify-nprime") {
    throw DomainError("unknown command '" + config.command + "'");
  }
  if (config.workers < 1) throw DomainError("--workers must be >= 1");
  if ((config.command == "construct" || config.command == "density") && config.xmax < 2) {
    throw DomainError("--xmax must be >= 2");
  }
  if (config.command == "pair" && (!config.p || !config.q)) throw DomainError("pair needs --p and --q");
  if (config.format != "json" && config.format != "csv") throw DomainError("--format must be json or csv");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& log) {
  validate(config);
  if (config.command == "construct") {
    PipelineOptions options;
    options.workers = config.workers;
    options.redundancy = config.redundancy;
    options.flips = config.flips;
    const ConstructionReport report = build_S(config.xmax, options);
    write_output(config, out, config.format == "csv" ? report_csv(report) : serialize_report(report));
    return 0;
  }
  if (config.command == "pair") {
    const PairOutcome outcome = evaluate_pair(*config.p, *config.q);
    const json doc = std::visit([](const auto& o) { return to_json(o); }, outcome);
    write_output(config, out, doc.dump(2) + "\n");
    return 0;
  }
  if (config.command == "density") {
    json doc = json::array();
    if (config.p) {
      doc.push_back(to_json(density_scan(*config.p, config.xmax, config.workers)));
    } else {
      for (u64 p : sieve_primes_1_mod_8(100).primes) {
        doc.push_back(to_json(density_scan(p, config.xmax, config.workers)));
      }
    }
    write_output(config, out, doc.dump(2) + "\n");
    return 0;
  }
  const NPrimeCertificate cert = build_nprime_certificate();
  write_output(config, out, to_json(cert).dump(2) + "\n");
  for (const auto& c : cert.checks) log << (c.passed ? "ok   " : "FAIL ") << c.name << "\n";
  log << "root discriminant 2^(" << cert.root_disc.two_exponent.get_str() << ") * sqrt("
      << cert.root_disc.radicand.get_str() << ") = " << cert.root_disc.decimal << "\n";
  return cert.passed() ? 0 : 2;
}

int exit_status(const std::exception& error) {
  return dynamic_cast<const DomainError*>(&error) != nullptr ? 1 : 2;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& log) {
  CLI::App app{"Explicit class field tower construction"};
  app.require_subcommand(1);
  RunConfig config;
  bool no_redundancy = false;

  auto* construct = app.add_subcommand("construct", "Build the set S of useful pairs up to X");
  construct->add_option("--xmax", config.xmax, "Prime budget X")->required();
  construct->add_option("--workers", config.workers, "Worker threads");
  construct->add_flag("--no-redundancy", no_redundancy, "Evaluate each unordered pair once");
  construct->add_option("--format", config.format, "Output format: json or csv");
  construct->add_option("--out", config.out_path, "Output file (default stdout)");
  construct->add_flag("--flip-beta", config.flips.beta)->group("");
  construct->add_flag("--negate-u", config.flips.u_sign)->group("");
  construct->add_flag("--invert-unit", config.flips.unit_inverse)->group("");

  auto* pair = app.add_subcommand("pair", "Evaluate one ordered pair");
  pair->add_option("--p", config.p, "p_i")->required();
  pair->add_option("--q", config.q, "p_j")->required();
  pair->add_option("--out", config.out_path, "Output file (default stdout)");

  auto* density = app.add_subcommand("density", "Empirical density of useful partners");
  density->add_option("--p", config.p, "p_i (default: every pool prime up to 100)");
  density->add_option("--xmax", config.xmax, "Scan bound x")->required();
  density->add_option("--workers", config.workers, "Worker threads");
  density->add_option("--out", config.out_path, "Output file (default stdout)");

  auto* nprime = app.add_subcommand("verify-nprime", "Certificate for the degree 256 example");
  nprime->add_option("--out", config.out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, log);
    return code == 0 ? 0 : 1;
  }
  config.command = app.get_subcommands().front()->get_name();
  config.redundancy = !no_redundancy;

  try {
    return run(config, out, log);
  } catch (const std::exception& e) {
    log << (exit_status(e) == 1 ? "error: " : "invariant violation: ") << e.what() << "\n";
    return exit_status(e);
  }
}

}  // namespace cft::cli
