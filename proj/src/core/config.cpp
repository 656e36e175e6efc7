#include "contilab/core/config.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "contilab/core/errors.hpp"
#include "contilab/core/rng.hpp"

namespace contilab {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

ExperimentConfig& ExperimentConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
  return *this;
}

ExperimentConfig& ExperimentConfig::set(const std::string& key, double value) { return set(key, format_number(value)); }

const std::string& ExperimentConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key " + key);
  return it->second;
}

namespace {

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " expects a number, got '" + text + "'");
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

double ExperimentConfig::get_double(const std::string& key) const { return parse_double(key, get(key)); }

std::uint64_t ExperimentConfig::get_u64(const std::string& key) const {
  const std::string& text = get(key);
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec == std::errc() && res.ptr == text.data() + text.size()) return v;
  // Accept integral values written in exponent form, e.g. 2e5.
  const double d = parse_double(key, text);
  if (d >= 0.0 && d < 1.8e19 && d == static_cast<double>(static_cast<std::uint64_t>(d))) {
    return static_cast<std::uint64_t>(d);
  }
  throw ConfigError("config key " + key + " expects a nonnegative integer, got '" + text + "'");
}

bool ExperimentConfig::get_bool(const std::string& key) const {
  const std::string& text = get(key);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("config key " + key + " expects a boolean, got '" + text + "'");
}

std::vector<double> ExperimentConfig::get_doubles(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  if (out.empty()) throw ConfigError("config key " + key + " expects a nonempty list");
  return out;
}

std::string ExperimentConfig::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

std::uint64_t ExperimentConfig::hash() const { return hash_string(name_ + "\n" + canonical()); }

std::uint64_t ExperimentConfig::hash(const std::vector<std::string>& prefixes) const {
  std::string text = name_ + "\n";
  for (const auto& [k, v] : values_) {
    for (const auto& p : prefixes) {
      if (k.rfind(p, 0) == 0) {
        text += k + "=" + v + "\n";
        break;
      }
    }
  }
  return hash_string(text);
}

}  // namespace contilab
