// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "chunkstore/error.hpp"
#include "chunkstore/rng.hpp"
#include "chunkstore/sim/experiment.hpp"

namespace chunkstore::sim {

// Experiment configs are JSON mirroring the SimConfig field names. Unknown
// keys are rejected with the offending path so typos fail loudly instead of
// silently running a different experiment.

/// What a config file requests: one pattern or both over the same workload.
struct RunSpec {
  SimConfig base;
  bool run_chunked = true;
  bool run_pointer = true;
};

namespace detail {

[[noreturn]] inline void config_fail(const std::string& path,
                                     const std::string& what) {
  raise(Errc::config_error, "config field '" + path + "': " + what);
}

inline void reject_unknown(const nlohmann::json& obj, const std::string& path,
                           const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key))
      config_fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

inline double get_number(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) config_fail(path, "expected a number");
  return j.get<double>();
}

}  // namespace detail

inline LagModel lag_model_from_json(const nlohmann::json& j,
                                    const std::string& path) {
  if (!j.is_object()) detail::config_fail(path, "expected an object");
  if (!j.contains("kind")) detail::config_fail(path + ".kind", "missing");
  const std::string kind = j.at("kind").is_string()
                               ? j.at("kind").get<std::string>()
                               : std::string();
  LagModel m;
  if (kind == "constant") {
    detail::reject_unknown(j, path, {"kind", "seconds", "cap_seconds"});
    m.kind = LagModel::Kind::constant;
    if (!j.contains("seconds")) detail::config_fail(path + ".seconds", "missing");
    m.constant_seconds = detail::get_number(j.at("seconds"), path + ".seconds");
  } else if (kind == "lognormal_mixture") {
    detail::reject_unknown(j, path,
                   {"kind", "base_mu", "base_sigma", "spike_probability",
                    "spike_mu", "spike_sigma", "cap_seconds"});
    m.kind = LagModel::Kind::lognormal_mixture;
    for (const char* field :
         {"base_mu", "base_sigma", "spike_probability", "spike_mu",
          "spike_sigma"})
      if (!j.contains(field)) detail::config_fail(path + "." + field, "missing");
    m.base_mu = detail::get_number(j.at("base_mu"), path + ".base_mu");
    m.base_sigma = detail::get_number(j.at("base_sigma"), path + ".base_sigma");
    m.spike_probability =
        detail::get_number(j.at("spike_probability"), path + ".spike_probability");
    m.spike_mu = detail::get_number(j.at("spike_mu"), path + ".spike_mu");
    m.spike_sigma = detail::get_number(j.at("spike_sigma"), path + ".spike_sigma");
  } else {
    detail::config_fail(path + ".kind", "must be 'constant' or 'lognormal_mixture'");
  }
  if (j.contains("cap_seconds")) {
    if (!j.at("cap_seconds").is_null())
      m.cap_seconds = detail::get_number(j.at("cap_seconds"), path + ".cap_seconds");
  }
  return m;
}

inline nlohmann::ordered_json lag_model_to_json(const LagModel& m) {
  nlohmann::ordered_json j;
  if (m.kind == LagModel::Kind::constant) {
    j["kind"] = "constant";
    j["seconds"] = m.constant_seconds;
  } else {
    j["kind"] = "lognormal_mixture";
    j["base_mu"] = m.base_mu;
    j["base_sigma"] = m.base_sigma;
    j["spike_probability"] = m.spike_probability;
    j["spike_mu"] = m.spike_mu;
    j["spike_sigma"] = m.spike_sigma;
  }
  if (m.cap_seconds) j["cap_seconds"] = *m.cap_seconds;
  return j;
}

namespace detail {

inline ProbePolicy probe_policy_from_json(const nlohmann::json& j,
                                          const std::string& path) {
  if (!j.is_object()) config_fail(path, "expected an object");
  if (!j.contains("kind")) config_fail(path + ".kind", "missing");
  const std::string kind = j.at("kind").is_string()
                               ? j.at("kind").get<std::string>()
                               : std::string();
  if (kind == "immediate") {
    reject_unknown(j, path, {"kind"});
    return ProbePolicy::immediate();
  }
  if (kind == "retry") {
    reject_unknown(j, path, {"kind", "retries", "interval_seconds"});
    for (const char* field : {"retries", "interval_seconds"})
      if (!j.contains(field)) config_fail(path + "." + field, "missing");
    if (!j.at("retries").is_number_unsigned())
      config_fail(path + ".retries", "expected a non-negative integer");
    return ProbePolicy::retry(
        j.at("retries").get<std::uint32_t>(),
        get_number(j.at("interval_seconds"), path + ".interval_seconds"));
  }
  config_fail(path + ".kind", "must be 'immediate' or 'retry'");
}

inline nlohmann::ordered_json probe_policy_to_json(const ProbePolicy& p) {
  nlohmann::ordered_json j;
  if (p.kind == ProbePolicy::Kind::immediate) {
    j["kind"] = "immediate";
  } else {
    j["kind"] = "retry";
    j["retries"] = p.retries;
    j["interval_seconds"] = p.interval_seconds;
  }
  return j;
}

}  // namespace detail

inline RunSpec run_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object())
    raise(Errc::config_error, "config root must be a JSON object");
  detail::reject_unknown(
      j, "",
      {"seed", "duration_seconds", "write_rate_per_second", "payload_bytes",
       "pattern", "db_lag", "object_lag", "probe_policy", "regions",
       "db_draw_per_transaction"});

  RunSpec spec;
  SimConfig& cfg = spec.base;
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned())
      detail::config_fail("seed", "expected a non-negative integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("duration_seconds"))
    cfg.duration_seconds =
        detail::get_number(j.at("duration_seconds"), "duration_seconds");
  if (j.contains("write_rate_per_second"))
    cfg.write_rate_per_second = detail::get_number(
        j.at("write_rate_per_second"), "write_rate_per_second");
  if (j.contains("payload_bytes")) {
    if (!j.at("payload_bytes").is_number_unsigned())
      detail::config_fail("payload_bytes", "expected a non-negative integer");
    cfg.payload_bytes = j.at("payload_bytes").get<std::uint64_t>();
  }
  if (j.contains("pattern")) {
    const std::string p = j.at("pattern").is_string()
                              ? j.at("pattern").get<std::string>()
                              : std::string();
    if (p == "chunked") {
      spec.run_chunked = true;
      spec.run_pointer = false;
    } else if (p == "pointer") {
      spec.run_chunked = false;
      spec.run_pointer = true;
    } else if (p == "both") {
      spec.run_chunked = spec.run_pointer = true;
    } else {
      detail::config_fail("pattern",
                          "must be 'chunked', 'pointer' or 'both'");
    }
  }
  if (j.contains("db_lag"))
    cfg.db_lag = lag_model_from_json(j.at("db_lag"), "db_lag");
  if (j.contains("object_lag"))
    cfg.object_lag =
        lag_model_from_json(j.at("object_lag"), "object_lag");
  if (j.contains("probe_policy"))
    cfg.probe_policy =
        detail::probe_policy_from_json(j.at("probe_policy"), "probe_policy");
  if (j.contains("regions")) {
    const auto& r = j.at("regions");
    if (!r.is_array() || r.size() != 2 || !r[0].is_string() ||
        !r[1].is_string())
      detail::config_fail("regions", "expected exactly two region names");
    cfg.regions = {r[0].get<std::string>(), r[1].get<std::string>()};
  }
  if (j.contains("db_draw_per_transaction")) {
    if (!j.at("db_draw_per_transaction").is_boolean())
      detail::config_fail("db_draw_per_transaction", "expected a bool");
    cfg.db_draw_per_transaction = j.at("db_draw_per_transaction").get<bool>();
  }

  try {
    cfg.validate();
  } catch (const Error& e) {
    raise(Errc::config_error, e.what());
  }
  return spec;
}

inline nlohmann::ordered_json run_spec_to_json(const RunSpec& spec) {
  const SimConfig& cfg = spec.base;
  nlohmann::ordered_json j;
  j["seed"] = cfg.seed;
  j["duration_seconds"] = cfg.duration_seconds;
  j["write_rate_per_second"] = cfg.write_rate_per_second;
  j["payload_bytes"] = cfg.payload_bytes;
  j["pattern"] = spec.run_chunked && spec.run_pointer
                     ? "both"
                     : (spec.run_chunked ? "chunked" : "pointer");
  j["db_lag"] = lag_model_to_json(cfg.db_lag);
  j["object_lag"] = lag_model_to_json(cfg.object_lag);
  j["probe_policy"] = detail::probe_policy_to_json(cfg.probe_policy);
  j["regions"] = {cfg.regions[0], cfg.regions[1]};
  j["db_draw_per_transaction"] = cfg.db_draw_per_transaction;
  return j;
}

/// The resolved-config echo written next to every report: the effective
/// config plus the generator identity, everything a rerun needs.
inline nlohmann::ordered_json resolved_config_json(const RunSpec& spec) {
  nlohmann::ordered_json j = run_spec_to_json(spec);
  j["rng_algorithm"] = std::string(kRngAlgorithm);
  return j;
}

}  // namespace chunkstore::sim
