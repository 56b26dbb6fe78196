#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gerd/core.hpp"
#include "gerd/pipeline.hpp"

namespace gerd {

using Json = nlohmann::json;

// JSON form of RenderParameters. Keys mirror the field layout:
//
//   resolution [w, h], length, upsample, threshold (null = upsample^2),
//   warmup, shape, base_size, seed, integrator_init ("uniform" | "zeros"),
//   translate, translate_start_x, translate_start_y,
//   translate_velocity_start [x, y], translate_velocity_delta,
//   scale, scale_start [x, y], scale_velocity_start, scale_velocity_delta,
//   rotate, rotate_start, rotate_velocity_start, rotate_velocity_delta,
//   shear, shear_start [x, y], shear_velocity_start, shear_velocity_delta,
//   noise_background, noise_shape, noise_event
//
// A *_velocity_delta is a Gaussian sigma, or the string "custom" when the
// recording was produced with a user acceleration function (which cannot
// be serialized).
namespace config_detail {

inline const std::set<std::string, std::less<>>& param_keys() {
  static const std::set<std::string, std::less<>> keys = {
      "resolution",       "length",
      "upsample",         "threshold",
      "warmup",           "shape",
      "base_size",        "seed",
      "integrator_init",  "translate",
      "translate_start_x", "translate_start_y",
      "translate_velocity_start", "translate_velocity_delta",
      "scale",            "scale_start",
      "scale_velocity_start", "scale_velocity_delta",
      "rotate",           "rotate_start",
      "rotate_velocity_start", "rotate_velocity_delta",
      "shear",            "shear_start",
      "shear_velocity_start", "shear_velocity_delta",
      "noise_background", "noise_shape",
      "noise_event",
  };
  return keys;
}

inline const std::set<std::string, std::less<>>& batch_keys() {
  static const std::set<std::string, std::less<>> keys = {"count", "seed_base", "output_dir", "parallelism"};
  return keys;
}

template <typename T>
T get(const Json& doc, std::string_view key) {
  try {
    return doc.at(std::string(key)).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid value for '" + std::string(key) + "': " + e.what());
  }
}

inline Vec2 get_vec2(const Json& doc, std::string_view key) {
  const auto values = get<std::vector<double>>(doc, key);
  if (values.size() != 2) throw ConfigError("'" + std::string(key) + "' must be a two-element array");
  return {values[0], values[1]};
}

inline Json delta_to_json(const DeltaSpec& d) { return d.is_custom() ? Json("custom") : Json(d.sigma); }

inline DeltaSpec delta_from_json(const Json& doc, std::string_view key) {
  const Json& v = doc.at(std::string(key));
  if (v.is_string() && v.get<std::string>() == "custom") {
    // Placeholder: the function itself was not stored.
    return {0.0, [name = std::string(key)](std::uint64_t, RandomStream&) -> Vec2 {
              throw ConfigError("'" + name + "' was a custom function and cannot be replayed from a file");
            }};
  }
  return {get<double>(doc, key), {}};
}

}  // namespace config_detail

inline Json to_json(const RenderParameters& p) {
  Json j;
  j["resolution"] = {p.width, p.height};
  j["length"] = p.length;
  j["upsample"] = p.upsample;
  j["threshold"] = p.threshold ? Json(*p.threshold) : Json(nullptr);
  j["warmup"] = p.warmup;
  j["shape"] = std::string(to_string(p.shape));
  j["base_size"] = p.base_size;
  j["seed"] = p.seed;
  j["integrator_init"] = p.integrator_init == IntegratorInit::Uniform ? "uniform" : "zeros";

  j["translate"] = p.translate.enabled;
  j["translate_start_x"] = p.translate.start_x ? Json(*p.translate.start_x) : Json(nullptr);
  j["translate_start_y"] = p.translate.start_y ? Json(*p.translate.start_y) : Json(nullptr);
  j["translate_velocity_start"] = {p.translate.velocity_start.x, p.translate.velocity_start.y};
  j["translate_velocity_delta"] = config_detail::delta_to_json(p.translate.velocity_delta);

  j["scale"] = p.scale.enabled;
  j["scale_start"] = {p.scale.start.x, p.scale.start.y};
  j["scale_velocity_start"] = {p.scale.velocity_start.x, p.scale.velocity_start.y};
  j["scale_velocity_delta"] = config_detail::delta_to_json(p.scale.velocity_delta);

  j["rotate"] = p.rotate.enabled;
  j["rotate_start"] = p.rotate.start;
  j["rotate_velocity_start"] = p.rotate.velocity_start;
  j["rotate_velocity_delta"] = config_detail::delta_to_json(p.rotate.velocity_delta);

  j["shear"] = p.shear.enabled;
  j["shear_start"] = {p.shear.start.x, p.shear.start.y};
  j["shear_velocity_start"] = {p.shear.velocity_start.x, p.shear.velocity_start.y};
  j["shear_velocity_delta"] = config_detail::delta_to_json(p.shear.velocity_delta);

  j["noise_background"] = p.noise.p_background;
  j["noise_shape"] = p.noise.p_shape;
  j["noise_event"] = p.noise.p_event;
  return j;
}

// Reads the keys present in `doc` on top of `base`. Unknown keys are an
// error unless listed in `extra_keys`.
inline RenderParameters params_from_json(const Json& doc, RenderParameters base = {},
                                         const std::set<std::string, std::less<>>& extra_keys = {}) {
  using namespace config_detail;
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!param_keys().contains(key) && !extra_keys.contains(key)) {
      throw ConfigError("unknown configuration key '" + key + "'");
    }
  }
  RenderParameters p = std::move(base);
  const auto has = [&](std::string_view key) { return doc.contains(std::string(key)); };
  const auto optional_double = [&](std::string_view key) -> std::optional<double> {
    if (doc.at(std::string(key)).is_null()) return std::nullopt;
    return get<double>(doc, key);
  };

  if (has("resolution")) {
    const auto res = get<std::vector<int>>(doc, "resolution");
    if (res.size() != 2) throw ConfigError("'resolution' must be [width, height]");
    p.width = res[0];
    p.height = res[1];
  }
  if (has("length")) p.length = get<std::uint32_t>(doc, "length");
  if (has("upsample")) p.upsample = get<int>(doc, "upsample");
  if (has("threshold")) p.threshold = optional_double("threshold");
  if (has("warmup")) p.warmup = get<std::uint32_t>(doc, "warmup");
  if (has("shape")) p.shape = shape_from_string(get<std::string>(doc, "shape"));
  if (has("base_size")) p.base_size = get<double>(doc, "base_size");
  if (has("seed")) p.seed = get<std::uint64_t>(doc, "seed");
  if (has("integrator_init")) {
    const auto mode = get<std::string>(doc, "integrator_init");
    if (mode == "uniform") {
      p.integrator_init = IntegratorInit::Uniform;
    } else if (mode == "zeros") {
      p.integrator_init = IntegratorInit::Zeros;
    } else {
      throw ConfigError("'integrator_init' must be \"uniform\" or \"zeros\"");
    }
  }

  if (has("translate")) p.translate.enabled = get<bool>(doc, "translate");
  if (has("translate_start_x")) p.translate.start_x = optional_double("translate_start_x");
  if (has("translate_start_y")) p.translate.start_y = optional_double("translate_start_y");
  if (has("translate_velocity_start")) p.translate.velocity_start = get_vec2(doc, "translate_velocity_start");
  if (has("translate_velocity_delta")) p.translate.velocity_delta = delta_from_json(doc, "translate_velocity_delta");

  if (has("scale")) p.scale.enabled = get<bool>(doc, "scale");
  if (has("scale_start")) p.scale.start = get_vec2(doc, "scale_start");
  if (has("scale_velocity_start")) p.scale.velocity_start = get_vec2(doc, "scale_velocity_start");
  if (has("scale_velocity_delta")) p.scale.velocity_delta = delta_from_json(doc, "scale_velocity_delta");

  if (has("rotate")) p.rotate.enabled = get<bool>(doc, "rotate");
  if (has("rotate_start")) p.rotate.start = get<double>(doc, "rotate_start");
  if (has("rotate_velocity_start")) p.rotate.velocity_start = get<double>(doc, "rotate_velocity_start");
  if (has("rotate_velocity_delta")) p.rotate.velocity_delta = delta_from_json(doc, "rotate_velocity_delta");

  if (has("shear")) p.shear.enabled = get<bool>(doc, "shear");
  if (has("shear_start")) p.shear.start = get_vec2(doc, "shear_start");
  if (has("shear_velocity_start")) p.shear.velocity_start = get_vec2(doc, "shear_velocity_start");
  if (has("shear_velocity_delta")) p.shear.velocity_delta = delta_from_json(doc, "shear_velocity_delta");

  if (has("noise_background")) p.noise.p_background = get<double>(doc, "noise_background");
  if (has("noise_shape")) p.noise.p_shape = get<double>(doc, "noise_shape");
  if (has("noise_event")) p.noise.p_event = get<double>(doc, "noise_event");

  p.validate();
  return p;
}

// A generation job: one parameter template expanded into `count`
// recordings with seeds seed_base .. seed_base + count - 1.
struct BatchConfig {
  RenderParameters params;
  std::uint32_t count = 1;
  std::uint64_t seed_base = 0;
  std::string output_dir = "dataset";
  unsigned parallelism = 1;

  std::vector<RenderParameters> expand() const {
    std::vector<RenderParameters> out(count, params);
    for (std::uint32_t i = 0; i < count; ++i) out[i].seed = seed_base + i;
    return out;
  }
};

inline BatchConfig batch_from_json(const Json& doc) {
  using namespace config_detail;
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  if (doc.contains("seed")) throw ConfigError("unknown configuration key 'seed' (batch configs use 'seed_base')");
  BatchConfig cfg;
  cfg.params = params_from_json(doc, {}, batch_keys());
  if (doc.contains("count")) cfg.count = get<std::uint32_t>(doc, "count");
  if (doc.contains("seed_base")) cfg.seed_base = get<std::uint64_t>(doc, "seed_base");
  if (doc.contains("output_dir")) cfg.output_dir = get<std::string>(doc, "output_dir");
  if (doc.contains("parallelism")) cfg.parallelism = get<unsigned>(doc, "parallelism");
  if (cfg.parallelism < 1) throw ConfigError("'parallelism' must be at least 1");
  return cfg;
}

inline Json parse_json_text(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

// Applies "key=value" overrides. The value is parsed as JSON when it can
// be, otherwise taken as a string (so shape=circle works unquoted).
inline void apply_overrides(Json& doc, const std::vector<std::string>& overrides) {
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    const std::string raw = item.substr(eq + 1);
    Json value = Json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    doc[key] = std::move(value);
  }
}

}  // namespace gerd
