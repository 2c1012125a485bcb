#pragma once

#include <json.hpp>

#include "helixlab/helix.hpp"
#include "helixlab/theorems.hpp"

namespace helixlab {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

// Top-level report envelope shared by every command. Field order is fixed,
// nothing time- or environment-dependent goes in, so identical invocations
// dump byte-identical documents.
Json make_document(const std::string& command, Json instance, Json params, Json result);

Json verdict_json(const HelixVerdict& v);
Json weak_helix_json(const WeakHelixResult& r);
Json theorem_report_json(const TheoremReport& r);
Json params_json(const VerifyParams& p);

std::string dump_document(const Json& doc);

} // namespace helixlab
