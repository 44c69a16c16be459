#include "freesplit/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "freesplit/error.hpp"

namespace freesplit {

namespace {

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "segment_length", "forward_horizon", "backward_horizon", "stability", "candidate_length", "length_cap",
      "max_moves",      "max_letters",     "power",            "range",     "chain_exponent",
      "lipschitz_pairs"};
  return keys;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

unsigned long long parse_count(const std::string& key, const std::string& value) {
  unsigned long long v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    invalid_input("setting " + key + " needs a non-negative integer, got '" + value + "'");
  }
  return v;
}

}  // namespace

std::map<std::string, std::string> parse_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) invalid_input("config line " + std::to_string(number) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) invalid_input("config line " + std::to_string(number) + ": empty key or value");
    out[key] = value;
  }
  return out;
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid_input("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_setting(ClassifyOptions& opts, const std::string& key, const std::string& value) {
  const auto v = parse_count(key, value);
  auto& att = opts.w.attraction;
  if (key == "segment_length") {
    att.segment_length = v;
  } else if (key == "forward_horizon") {
    att.forward_horizon = static_cast<unsigned>(v);
  } else if (key == "backward_horizon") {
    att.backward_horizon = static_cast<unsigned>(v);
  } else if (key == "stability") {
    att.stability = static_cast<unsigned>(v);
  } else if (key == "candidate_length") {
    opts.w.candidate_length = v;
  } else if (key == "length_cap") {
    opts.w.length_cap = v;
  } else if (key == "max_moves") {
    opts.whitehead.max_moves = v;
  } else if (key == "max_letters") {
    opts.whitehead.max_letters = v;
  } else if (key == "power") {
    opts.power = static_cast<unsigned>(v);
  } else if (key == "range") {
    opts.range = static_cast<int>(v);
  } else if (key == "chain_exponent") {
    opts.chain_exponent = static_cast<unsigned>(v);
  } else if (key == "lipschitz_pairs") {
    opts.lipschitz_pairs = v;
  } else {
    invalid_input("unknown setting '" + key + "'");
  }
  att.validate();
}

void apply_config(ClassifyOptions& opts, const std::map<std::string, std::string>& settings) {
  for (const auto& [k, v] : settings) apply_setting(opts, k, v);
}

void apply_env(ClassifyOptions& opts, const EnvLookup& lookup) {
  EnvLookup get = lookup ? lookup : [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (!v) return std::nullopt;
    return std::string(v);
  };
  for (const auto& key : known_keys()) {
    std::string name = kEnvPrefix;
    for (char c : key) name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (auto v = get(name)) apply_setting(opts, key, trim(*v));
  }
}

std::map<std::string, std::string> settings_of(const ClassifyOptions& opts) {
  const auto& att = opts.w.attraction;
  return {{"segment_length", std::to_string(att.segment_length)},
          {"forward_horizon", std::to_string(att.forward_horizon)},
          {"backward_horizon", std::to_string(att.backward_horizon)},
          {"stability", std::to_string(att.stability)},
          {"candidate_length", std::to_string(opts.w.candidate_length)},
          {"length_cap", std::to_string(opts.w.length_cap)},
          {"max_moves", std::to_string(opts.whitehead.max_moves)},
          {"max_letters", std::to_string(opts.whitehead.max_letters)},
          {"power", std::to_string(opts.power)},
          {"range", std::to_string(opts.range)},
          {"chain_exponent", std::to_string(opts.chain_exponent)},
          {"lipschitz_pairs", std::to_string(opts.lipschitz_pairs)}};
}

}  // namespace freesplit
