#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace contilab {

/// Flat key-value experiment description. Keys are dotted ("agent.alpha").
class ExperimentConfig {
 public:
  ExperimentConfig() = default;
  explicit ExperimentConfig(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  const std::map<std::string, std::string>& values() const { return values_; }

  ExperimentConfig& set(const std::string& key, const std::string& value);
  ExperimentConfig& set(const std::string& key, double value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  /// Throws ConfigError for missing keys or unparsable values.
  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::size_t get_size(const std::string& key) const { return static_cast<std::size_t>(get_u64(key)); }
  bool get_bool(const std::string& key) const;
  /// Comma-separated list of reals.
  std::vector<double> get_doubles(const std::string& key) const;

  /// "key=value" lines in key order.
  std::string canonical() const;
  /// Hash of the canonical form, optionally restricted to keys with the given prefixes.
  std::uint64_t hash() const;
  std::uint64_t hash(const std::vector<std::string>& prefixes) const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

 private:
  std::string name_;
  std::map<std::string, std::string> values_;
};

/// Shortest "%.12g" rendering.
std::string format_number(double v);

}  // namespace contilab
