#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "minact/applications.hpp"
#include "minact/el_oracle.hpp"
#include "minact/metric.hpp"
#include "minact/pairwise.hpp"
#include "minact/transport.hpp"

namespace minact::cli {

using nlohmann::json;

/// Rejected configuration. `key` is the dotted path of the offending entry
/// (empty for syntax errors, which carry the line in the message).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

json load_config_file(const std::string& path);
json parse_config_text(const std::string& text);

/// `a.b.c=value`; the value is parsed as JSON when possible, otherwise kept as a string.
void apply_override(json& config, const std::string& assignment);

/// Reads one JSON object and remembers which keys were consumed, so that
/// leftovers can be rejected.
class Section {
 public:
  Section(const json& node, std::string path);

  bool has(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  double number(const std::string& key) const;
  double positive(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback, int min_value) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  Vec vector(const std::string& key) const;
  Vec vector(const std::string& key, const Vec& fallback) const;
  Section child(const std::string& key) const;
  const json& raw(const std::string& key) const;
  std::string path(const std::string& key) const;

  /// Throws ConfigError on the first key that was never read.
  void finish() const;

 private:
  const json* node_;
  std::string path_;
  mutable std::set<std::string> used_;
};

DensityPtr parse_density(const Section& s);
PairwiseConfig parse_pairwise_config(const Section& s);
TransportConfig parse_transport_config(const Section& s, std::uint64_t seed);
ShootingOptions parse_shooting(const Section& s);
std::shared_ptr<MetricField> parse_metric(const Section& s, const DensityPtr& density, double alpha);

struct EndpointPair {
  Vec x0, x1;
};
std::vector<EndpointPair> parse_pairs(const Section& s, const std::string& key);

}  // namespace minact::cli
