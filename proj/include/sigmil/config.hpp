#pragma once

// TrackerConfig <-> flat key=value text and JSON; FeaturePool -> JSON.

#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>

#include <nlohmann/json.hpp>

#include "sigmil/errors.hpp"
#include "sigmil/features.hpp"
#include "sigmil/tracker.hpp"

namespace sigmil {

namespace detail {

template <typename T>
T parse_value(const std::string& key, const std::string& raw) {
  if constexpr (std::is_unsigned_v<T>) {
    if (raw.find('-') != std::string::npos) throw InputError("config key '" + key + "' must be non-negative");
  }
  std::istringstream in(raw);
  T v{};
  in >> v;
  if (in.fail() || !(in >> std::ws).eof()) throw InputError("bad value '" + raw + "' for config key '" + key + "'");
  return v;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Single table of config keys so text, JSON and CLI overrides agree.
inline std::map<std::string, std::function<void(TrackerConfig&, const std::string&)>> config_setters() {
  using Cfg = TrackerConfig;
  using S = std::string;
  return {
      {"num_weak", [](Cfg& c, const S& v) { c.num_weak = parse_value<std::size_t>("num_weak", v); }},
      {"num_select", [](Cfg& c, const S& v) { c.num_select = parse_value<std::size_t>("num_select", v); }},
      {"ensemble", [](Cfg& c, const S& v) { c.ensemble = parse_value<std::size_t>("ensemble", v); }},
      {"learning_rate", [](Cfg& c, const S& v) { c.learning_rate = parse_value<double>("learning_rate", v); }},
      {"alpha_pos", [](Cfg& c, const S& v) { c.alpha.alpha_pos = parse_value<double>("alpha_pos", v); }},
      {"alpha_neg", [](Cfg& c, const S& v) { c.alpha.alpha_neg = parse_value<double>("alpha_neg", v); }},
      {"pos_radius", [](Cfg& c, const S& v) { c.sample.pos_radius = parse_value<double>("pos_radius", v); }},
      {"neg_inner", [](Cfg& c, const S& v) { c.sample.neg_inner = parse_value<double>("neg_inner", v); }},
      {"neg_outer", [](Cfg& c, const S& v) { c.sample.neg_outer = parse_value<double>("neg_outer", v); }},
      {"neg_count", [](Cfg& c, const S& v) { c.sample.neg_count = parse_value<std::size_t>("neg_count", v); }},
      {"neg_train_count",
       [](Cfg& c, const S& v) { c.sample.neg_train_count = parse_value<std::size_t>("neg_train_count", v); }},
      {"search_radius", [](Cfg& c, const S& v) { c.sample.search_radius = parse_value<double>("search_radius", v); }},
      {"prior", [](Cfg& c, const S& v) { c.prior = parse_value<double>("prior", v); }},
      {"seed", [](Cfg& c, const S& v) { c.seed = parse_value<std::uint64_t>("seed", v); }},
  };
}

}  // namespace detail

inline void set_config_value(TrackerConfig& cfg, const std::string& key, const std::string& value) {
  static const auto setters = detail::config_setters();
  const auto it = setters.find(key);
  if (it == setters.end()) throw InputError("unknown config key '" + key + "'");
  it->second(cfg, value);
}

/// Applies "key = value" lines on top of `cfg`. Blank lines and '#' comments are ignored.
inline TrackerConfig parse_config_text(const std::string& text, TrackerConfig cfg = {}) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError("config line " + std::to_string(lineno) + " lacks '='");
    set_config_value(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return cfg;
}

inline nlohmann::json to_json(const TrackerConfig& c) {
  return {{"num_weak", c.num_weak},
          {"num_select", c.num_select},
          {"ensemble", c.ensemble},
          {"learning_rate", c.learning_rate},
          {"alpha_pos", c.alpha.alpha_pos},
          {"alpha_neg", c.alpha.alpha_neg},
          {"pos_radius", c.sample.pos_radius},
          {"neg_inner", c.sample.neg_inner},
          {"neg_outer", c.sample.neg_outer},
          {"neg_count", c.sample.neg_count},
          {"neg_train_count", c.sample.neg_train_count},
          {"search_radius", c.sample.search_radius},
          {"prior", c.prior},
          {"seed", c.seed}};
}

inline TrackerConfig config_from_json(const nlohmann::json& j, TrackerConfig cfg = {}) {
  if (!j.is_object()) throw InputError("config JSON must be an object");
  for (const auto& [key, value] : j.items()) {
    // dump() of a double keeps full round-trip precision.
    set_config_value(cfg, key, value.is_string() ? value.get<std::string>() : value.dump());
  }
  return cfg;
}

inline std::string to_config_text(const TrackerConfig& c) {
  const auto j = to_json(c);
  std::ostringstream os;
  for (const auto& [key, value] : j.items()) os << key << " = " << value.dump() << '\n';
  return os.str();
}

inline nlohmann::json to_json(const FeaturePool& pool) {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& f : pool.features) {
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& p : f.parts) {
      parts.push_back({{"x", p.rect.x}, {"y", p.rect.y}, {"w", p.rect.w}, {"h", p.rect.h}, {"weight", p.weight}});
    }
    features.push_back({{"id", f.id}, {"parts", std::move(parts)}});
  }
  return {{"patch_w", pool.patch_w}, {"patch_h", pool.patch_h}, {"features", std::move(features)}};
}

}  // namespace sigmil
