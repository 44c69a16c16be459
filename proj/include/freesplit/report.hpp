#pragma once

// Versioned JSON reports. Field order is fixed and no timing data is
// written, so equal inputs give byte-equal output.

#include <string>
#include <vector>

#include <json.hpp>

#include "freesplit/classify.hpp"
#include "freesplit/config.hpp"

namespace freesplit {

inline constexpr const char* kReportSchema = "freesplit-report/1";

using Json = nlohmann::ordered_json;

// {"schema", "kind", "subject", "parameters"} plus the body fields.
Json envelope(const std::string& kind, const std::string& subject, const ClassifyOptions& opts);

Json to_json(const FillsVerdict& v, const std::vector<std::string>& names);
Json to_json(const WResult& r);
Json to_json(const DisplacementTable& t, const std::vector<std::string>& names);
Json to_json(const LipschitzReport& r);
Json to_json(const DivergenceReport& r);
Json to_json(const BoundedChain& c);
Json to_json(const PeriodicWitness& p);
Json to_json(const DistanceResult& d);
Json to_json(const Classification& c);

Json classify_report(const ExampleSpec& spec, const ClassifyOptions& opts, const Classification& c);

// Two-space indentation and a trailing newline.
std::string dump(const Json& j);

// Plain-text summary of a classification, one fact per line.
std::string summary(const ExampleSpec& spec, const Classification& c);

}  // namespace freesplit
