#pragma once

// JSON scenario format. Complex numbers are [re, im] pairs.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wiretap/model.hpp"

namespace wiretap {

namespace detail {

inline nlohmann::json complex_to_json(const Complex& z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError({{ErrorCode::DimensionMismatch, field, "complex values are [re, im] pairs"}});
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<ComplexVector> complex_rows_from_json(const nlohmann::json& j,
                                                         const std::string& field) {
  if (!j.is_array()) throw ConfigError({{ErrorCode::DimensionMismatch, field, "expected an array"}});
  std::vector<ComplexVector> rows;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const auto& row = j[r];
    const std::string name = field + "[" + std::to_string(r) + "]";
    if (!row.is_array()) throw ConfigError({{ErrorCode::DimensionMismatch, name, "expected an array"}});
    ComplexVector out;
    for (std::size_t c = 0; c < row.size(); ++c) {
      out.push_back(complex_from_json(row[c], name + "[" + std::to_string(c) + "]"));
    }
    rows.push_back(std::move(out));
  }
  return rows;
}

inline std::vector<double> reals_from_json(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError({{ErrorCode::DimensionMismatch, field, "expected an array"}});
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError({{ErrorCode::DimensionMismatch, field, "expected numbers"}});
    out.push_back(v.get<double>());
  }
  return out;
}

inline const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError({{ErrorCode::ConfigError, key, "missing key"}});
  return *it;
}

}  // namespace detail

inline nlohmann::json to_json(const SystemConfig& cfg) {
  nlohmann::json j;
  j["num_users"] = cfg.num_users;
  j["num_eve_antennas"] = cfg.num_eve_antennas;
  auto rows = [](const std::vector<ComplexVector>& m) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : m) {
      nlohmann::json r = nlohmann::json::array();
      for (const auto& z : row) r.push_back(detail::complex_to_json(z));
      out.push_back(std::move(r));
    }
    return out;
  };
  j["gains"] = rows(cfg.gains);
  j["eve_channels"] = rows(cfg.eve_channels);
  j["antenna_noise_vars"] = cfg.antenna_noise_vars;
  j["processing_noise_vars"] = cfg.processing_noise_vars;
  j["eve_antenna_noise_var"] = cfg.eve_antenna_noise_var;
  j["eve_processing_noise_var"] = cfg.eve_processing_noise_var;
  j["power_budget"] = cfg.power_budget;
  j["eh_demands"] = cfg.eh_demands;
  j["energy_model"] = cfg.energy_model == EnergyModel::ProductForm ? "product" : "reformulated";
  return j;
}

/// Parses and validates a scenario. Structural problems and invariant
/// violations both surface as ConfigError.
inline SystemConfig config_from_json(const nlohmann::json& j) {
  using detail::require;
  if (!j.is_object()) throw ConfigError({{ErrorCode::ConfigError, "<root>", "expected an object"}});
  SystemConfig cfg;
  auto count = [&](const char* key) {
    const auto& v = require(j, key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ConfigError({{ErrorCode::DimensionMismatch, key, "expected a non-negative integer"}});
    }
    return static_cast<std::size_t>(v.get<long long>());
  };
  cfg.num_users = count("num_users");
  cfg.num_eve_antennas = count("num_eve_antennas");
  cfg.gains = detail::complex_rows_from_json(require(j, "gains"), "gains");
  cfg.eve_channels = detail::complex_rows_from_json(require(j, "eve_channels"), "eve_channels");
  cfg.antenna_noise_vars = detail::reals_from_json(require(j, "antenna_noise_vars"), "antenna_noise_vars");
  cfg.processing_noise_vars =
      detail::reals_from_json(require(j, "processing_noise_vars"), "processing_noise_vars");
  auto scalar = [&](const char* key) {
    const auto& v = require(j, key);
    if (!v.is_number()) throw ConfigError({{ErrorCode::ConfigError, key, "expected a number"}});
    return v.get<double>();
  };
  cfg.eve_antenna_noise_var = scalar("eve_antenna_noise_var");
  cfg.eve_processing_noise_var = scalar("eve_processing_noise_var");
  cfg.power_budget = detail::reals_from_json(require(j, "power_budget"), "power_budget");
  cfg.eh_demands = detail::reals_from_json(require(j, "eh_demands"), "eh_demands");
  if (auto it = j.find("energy_model"); it != j.end()) {
    const std::string model = it->is_string() ? it->get<std::string>() : "";
    if (model == "product") {
      cfg.energy_model = EnergyModel::ProductForm;
    } else if (model == "reformulated") {
      cfg.energy_model = EnergyModel::Reformulated;
    } else {
      throw ConfigError({{ErrorCode::ConfigError, "energy_model", "expected \"product\" or \"reformulated\""}});
    }
  }
  return validate_config(std::move(cfg));
}

inline SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({{ErrorCode::ConfigError, "scenario", "cannot open '" + path + "'"}});
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError({{ErrorCode::ConfigError, "scenario", std::string("malformed JSON: ") + e.what()}});
  }
  return config_from_json(j);
}

}  // namespace wiretap
