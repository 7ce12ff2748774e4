#pragma once
// Shared fixtures and independent oracles for the test suite.
#include <json.hpp>

#include <cmath>
#include <complex>
#include <filesystem>
#include <random>
#include <string>

#include "llc/design.hpp"
#include "llc/tank.hpp"

namespace llc::test {

inline DesignRequirements reference_requirements() {
  DesignRequirements r;
  r.Vin_min = 40.0;
  r.Vin_nom = 48.0;
  r.Vin_max = 48.0;
  r.Vout_min = r.Vout_nom = r.Vout_max = 12.0;
  r.Iout_min = 0.05;
  r.Iout_max = 0.5;
  r.f0_target = 100e3;
  r.fsw_min = 65e3;
  r.fsw_max = 200e3;
  return r;
}

inline constexpr double kRefN = 1.83;
inline constexpr double kRefLn = 2.05;
inline constexpr double kRefQe = 0.36;

inline TankParams reference_tank() {
  return synthesize_tank(reference_requirements(), kRefN, kRefLn, kRefQe);
}

inline DesignReport reference_design(ESeries series = ESeries::E12) {
  DesignReport r = check_feasibility(reference_tank(), reference_requirements(), kRefN);
  r.series = series;
  r.tank_rounded = round_components(r.tank, series).tank;
  return r;
}

// Gain as the voltage divider between the series branch and the magnetizing
// branch in parallel with the reflected load, all in units of sqrt(Lr/Cr).
inline double divider_gain(double Ln, double Qe, double fn) {
  const std::complex<double> j(0.0, 1.0);
  const std::complex<double> zs = j * fn + 1.0 / (j * fn);
  const std::complex<double> zm = j * fn * Ln;
  const std::complex<double> zp = Qe == 0.0 ? zm : zm * (1.0 / Qe) / (zm + 1.0 / Qe);
  return std::abs(zp / (zs + zp));
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline std::filesystem::path fresh_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("llc_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::filesystem::path source_path(const std::string& rel) {
  return std::filesystem::path(LLC_SOURCE_DIR) / rel;
}

// Validator for the JSON Schema keywords used by the shipped schema.
inline bool schema_valid(const nlohmann::json& doc, const nlohmann::json& schema,
                         const nlohmann::json& root, std::string& why, const std::string& at = "$") {
  auto fail = [&](const std::string& m) {
    why = at + ": " + m;
    return false;
  };
  if (schema.contains("$ref")) {
    const std::string ref = schema["$ref"];
    const std::string prefix = "#/$defs/";
    if (ref.rfind(prefix, 0) != 0) return fail("unsupported $ref " + ref);
    return schema_valid(doc, root["$defs"][ref.substr(prefix.size())], root, why, at);
  }
  if (schema.contains("oneOf")) {
    int matches = 0;
    std::string ignored;
    for (const auto& s : schema["oneOf"]) matches += schema_valid(doc, s, root, ignored, at) ? 1 : 0;
    if (matches != 1) return fail("oneOf matched " + std::to_string(matches));
  }
  if (schema.contains("type")) {
    const std::string t = schema["type"];
    const bool ok = (t == "object" && doc.is_object()) || (t == "array" && doc.is_array()) ||
                    (t == "string" && doc.is_string()) || (t == "boolean" && doc.is_boolean()) ||
                    (t == "null" && doc.is_null()) || (t == "number" && doc.is_number()) ||
                    (t == "integer" && doc.is_number_integer());
    if (!ok) return fail("expected " + t);
  }
  if (schema.contains("const") && doc != schema["const"]) return fail("const mismatch");
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& e : schema["enum"]) found = found || e == doc;
    if (!found) return fail("not in enum");
  }
  if (doc.is_number()) {
    const double v = doc.get<double>();
    if (schema.contains("minimum") && v < schema["minimum"].get<double>()) return fail("below minimum");
    if (schema.contains("exclusiveMinimum") && v <= schema["exclusiveMinimum"].get<double>())
      return fail("not above exclusiveMinimum");
  }
  if (doc.is_array()) {
    if (schema.contains("minItems") && doc.size() < schema["minItems"].get<std::size_t>()) return fail("too few items");
    if (schema.contains("maxItems") && doc.size() > schema["maxItems"].get<std::size_t>()) return fail("too many items");
    if (schema.contains("items"))
      for (std::size_t i = 0; i < doc.size(); ++i)
        if (!schema_valid(doc[i], schema["items"], root, why, at + "[" + std::to_string(i) + "]")) return false;
  }
  if (doc.is_object()) {
    if (schema.contains("required"))
      for (const auto& k : schema["required"])
        if (!doc.contains(k.get<std::string>())) return fail("missing " + k.get<std::string>());
    const auto props = schema.value("properties", nlohmann::json::object());
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      if (props.contains(it.key())) {
        if (!schema_valid(it.value(), props[it.key()], root, why, at + "." + it.key())) return false;
      } else if (schema.value("additionalProperties", true) == false) {
        return fail("unexpected property " + it.key());
      }
    }
  }
  return true;
}

}  // namespace llc::test
