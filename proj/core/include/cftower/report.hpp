#pragma once

// JSON and CSV encodings of pipeline results. Big integers are decimal
// strings; rationals are {"num", "den"} string pairs.

#include <string>

#include <nlohmann/json.hpp>

#include "cftower/chebotarev.hpp"
#include "cftower/nprime.hpp"
#include "cftower/tower.hpp"

namespace cft {

using nlohmann::json;

/// Library version written into report metadata.
std::string library_version();

/// Fixed description of the tie-break conventions every report is expressed in.
json tie_break_conventions();

json to_json(const QuadInt& x);
json to_json(const BiquadElem& x);
json to_json(const mpq_class& x);
json to_json(const UsefulPair& pair);
json to_json(const PairRejection& rejection);
json to_json(const ConstructionReport& report);
json to_json(const GeneratorManifest& manifest);
json to_json(const DensityReport& report);
json to_json(const NPrimeCertificate& certificate);

// Parsers throw ParseError on malformed input.
QuadInt quad_from_json(const json& j);
BiquadElem biquad_from_json(const json& j);
mpq_class rational_from_json(const json& j);
UsefulPair useful_pair_from_json(const json& j);
PairRejection rejection_from_json(const json& j);
ConstructionReport report_from_json(const json& j);
GeneratorManifest manifest_from_json(const json& j);
DensityReport density_from_json(const json& j);

std::string serialize_report(const ConstructionReport& report);
ConstructionReport parse_report(const std::string& text);
std::string serialize_manifest(const GeneratorManifest& manifest);
GeneratorManifest parse_manifest(const std::string& text);

/// One row per evaluated ordered pair in lexicographic order.
std::string report_csv(const ConstructionReport& report);

}  // namespace cft
