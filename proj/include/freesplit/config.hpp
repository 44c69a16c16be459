#pragma once

// key = value settings for the classifier and the W machinery, with
// environment overrides FREESPLIT_<KEY> (key upper-cased).
//
//   segment_length    L, central leaf subword length           (64)
//   forward_horizon   h+                                        (40)
//   backward_horizon  h-                                        (40)
//   stability         s                                         (3)
//   candidate_length  l, candidate class length                 (3)
//   length_cap        orbit length cap in letters               (4000000)
//   max_moves         Whitehead move budget                     (100000)
//   max_letters       Whitehead letter budget                   (10000)
//   power             classify power, 0 for automatic           (0)
//   range             displacement table half-width             (4)
//   chain_exponent    k of the bounded orbit chain              (3)
//   lipschitz_pairs   adjacent pairs checked when loxodromic    (40)

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "freesplit/classify.hpp"

namespace freesplit {

inline constexpr const char* kEnvPrefix = "FREESPLIT_";

// Blank lines and '#' comments skipped. Throws InvalidInput on a malformed
// line.
std::map<std::string, std::string> parse_config(const std::string& text);
std::map<std::string, std::string> read_config(const std::string& path);

// Throws InvalidInput on an unknown key or a bad value.
void apply_setting(ClassifyOptions& opts, const std::string& key, const std::string& value);
void apply_config(ClassifyOptions& opts, const std::map<std::string, std::string>& settings);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
// Reads FREESPLIT_<KEY> for every known key; the default lookup is getenv.
void apply_env(ClassifyOptions& opts, const EnvLookup& lookup = {});

std::map<std::string, std::string> settings_of(const ClassifyOptions& opts);

}  // namespace freesplit
