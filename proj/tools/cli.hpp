#pragma once

#include <exception>
#include <optional>
#include <ostream>
#include <string>

#include "cftower/arith.hpp"
#include "cftower/tower.hpp"

namespace cft::cli {

struct RunConfig {
  std::string command;  // construct | pair | density | verify-nprime
  u64 xmax = 0;
  std::optional<u64> p;
  std::optional<u64> q;
  std::string out_path;  // empty: write to the given stream
  std::string format = "json";
  unsigned workers = 1;
  bool redundancy = true;
  TieBreakFlips flips;
};

/// Throws DomainError for an invalid configuration.
void validate(const RunConfig& config);

/// Executes one command. Returns 0, or 2 when the N' certificate fails.
/// Exceptions propagate; see exit_status.
int run(const RunConfig& config, std::ostream& out, std::ostream& log);

/// 1 for DomainError, 2 for everything else.
int exit_status(const std::exception& error);

/// Parses argv, runs, and maps failures to exit codes.
int main(int argc, char** argv, std::ostream& out, std::ostream& log);

}  // namespace cft::cli
