// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Command-line front end: run replication experiments, calibrate lag models
// against latency targets, and exercise the chunked-object protocol against
// a file-backed local store.
//
// Exit codes: 0 success, 1 internal failure, 2 configuration/validation
// error, 3 calibration failure, 4 entity not found, 5 entity corrupt.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chunkstore/chunkstore.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCalibration = 3;
constexpr int kExitNotFound = 4;
constexpr int kExitCorrupt = 5;

int exit_code_for(const chunkstore::Error& e) {
  switch (e.code()) {
    case chunkstore::Errc::entity_not_found:
      return kExitNotFound;
    case chunkstore::Errc::entity_corrupt:
      return kExitCorrupt;
    case chunkstore::Errc::calibration_failed:
      return kExitCalibration;
    case chunkstore::Errc::config_error:
    case chunkstore::Errc::invalid_argument:
    case chunkstore::Errc::entity_too_large:
      return kExitConfig;
    default:
      return kExitInternal;
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) chunkstore::raise(chunkstore::Errc::invalid_argument,
                             "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_file(const fs::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) chunkstore::raise(chunkstore::Errc::invalid_argument,
                              "cannot write " + path.string());
  out.write(contents.data(),
            static_cast<std::streamsize>(contents.size()));
}

std::int64_t now_millis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

// ---------------------------------------------------------------- simulate

// Applies one "--set key=value" override onto the config JSON. Dots descend
// into nested objects; the value is parsed as JSON when possible and falls
// back to a plain string.
void apply_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    chunkstore::raise(chunkstore::Errc::config_error,
                      "--set expects key=value, got '" + assignment + "'");
  const std::string dotted = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;  // unquoted strings, e.g. pattern=pointer
  }
  json* node = &config;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', start);
    const std::string key = dotted.substr(
        start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty())
      chunkstore::raise(chunkstore::Errc::config_error,
                        "--set key has an empty path segment");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (!node->is_object()) *node = json::object();
    start = dot + 1;
  }
}

int cmd_simulate(const std::optional<std::string>& config_path,
                 const std::string& out_dir,
                 const std::optional<std::uint64_t>& seed,
                 const std::vector<std::string>& overrides) {
  json config_json;
  if (config_path) {
    try {
      config_json = json::parse(read_file(*config_path));
    } catch (const json::exception& e) {
      std::cerr << "config parse error: " << e.what() << "\n";
      return kExitConfig;
    }
  } else {
    chunkstore::sim::RunSpec defaults;
    defaults.base = chunkstore::sim::steady_state_scenario(42);
    config_json = json::parse(
        chunkstore::sim::run_spec_to_json(defaults).dump());
  }
  for (const std::string& assignment : overrides)
    apply_override(config_json, assignment);
  if (seed) config_json["seed"] = *seed;

  const chunkstore::sim::RunSpec spec =
      chunkstore::sim::run_spec_from_json(config_json);

  fs::create_directories(out_dir);

  std::optional<chunkstore::sim::SimMetrics> chunked;
  std::optional<chunkstore::sim::SimMetrics> pointer;
  if (spec.run_chunked) {
    chunkstore::sim::SimConfig cfg = spec.base;
    cfg.pattern = chunkstore::sim::Pattern::chunked;
    chunked = chunkstore::sim::run_experiment(cfg);
  }
  if (spec.run_pointer) {
    chunkstore::sim::SimConfig cfg = spec.base;
    cfg.pattern = chunkstore::sim::Pattern::pointer;
    pointer = chunkstore::sim::run_experiment(cfg);
  }

  chunkstore::sim::Report report =
      chunked && pointer
          ? chunkstore::sim::render_report(*chunked, *pointer)
          : (chunked ? chunkstore::sim::render_report(
                           chunkstore::sim::Pattern::chunked, *chunked)
                     : chunkstore::sim::render_report(
                           chunkstore::sim::Pattern::pointer, *pointer));

  write_file(fs::path(out_dir) / "report.txt", report.text);
  write_file(fs::path(out_dir) / "metrics.csv", report.csv);
  write_file(fs::path(out_dir) / "resolved.json",
             chunkstore::sim::resolved_config_json(spec).dump(2) + "\n");

  std::cout << report.text;
  std::cout << "wrote report.txt, metrics.csv, resolved.json to " << out_dir
            << "\n";
  return kExitOk;
}

// --------------------------------------------------------------- calibrate

int cmd_calibrate(double p50, double p95, double p99,
                  const std::string& out_path) {
  const chunkstore::sim::LagModel model =
      chunkstore::sim::calibrate_lag_model(p50, p95, p99);
  const auto measured = chunkstore::sim::empirical_quantiles(
      model, 1'000'000, /*seed=*/0x9277de1f);

  ordered_json doc;
  doc["lag_model"] = chunkstore::sim::lag_model_to_json(model);
  ordered_json verification;
  verification["draws"] = 1'000'000;
  verification["targets"] = {{"p50", p50}, {"p95", p95}, {"p99", p99}};
  verification["empirical"] = {
      {"p50", measured.p50}, {"p95", measured.p95}, {"p99", measured.p99}};
  verification["relative_error"] = {{"p50", measured.p50 / p50 - 1.0},
                                    {"p95", measured.p95 / p95 - 1.0},
                                    {"p99", measured.p99 / p99 - 1.0}};
  doc["verification"] = verification;

  const std::string text = doc.dump(2) + "\n";
  write_file(out_path, text);
  std::cout << text;
  return kExitOk;
}

// -------------------------------------------------- local-store subcommands

chunkstore::kv::RegionStore load_or_create_store(const fs::path& path,
                                                 bool must_exist) {
  if (fs::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    return chunkstore::kv::load_store(in, "local");
  }
  if (must_exist)
    chunkstore::raise(chunkstore::Errc::invalid_argument,
                      "store snapshot not found: " + path.string());
  return chunkstore::kv::RegionStore("local");
}

void persist_store(const chunkstore::kv::RegionStore& store,
                   const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) chunkstore::raise(chunkstore::Errc::invalid_argument,
                              "cannot write " + path.string());
  chunkstore::kv::dump_store(store, out);
}

std::optional<chunkstore::EntityVersion> newest_version_in_partition(
    const chunkstore::kv::RegionStore& store, const std::string& entity_id) {
  std::optional<chunkstore::EntityVersion> newest;
  for (const auto& item : store.query_partition(entity_id)) {
    const std::string* ver = item.find_string(chunkstore::protocol::kAttrVer);
    if (!ver) continue;
    auto parsed = chunkstore::EntityVersion::parse(*ver);
    if (parsed && (!newest || *parsed > *newest)) newest = *parsed;
  }
  return newest;
}

constexpr std::string_view kCliWriterId = "local-";

chunkstore::protocol::WriteReceipt put_through_store(
    chunkstore::kv::RegionStore& store, const std::string& entity_id,
    const chunkstore::Bytes& payload, std::int64_t at_millis,
    const chunkstore::protocol::WriteOptions& opts) {
  const auto version = chunkstore::generate_version(
      at_millis, kCliWriterId, newest_version_in_partition(store, entity_id));
  return chunkstore::protocol::write_entity(store, entity_id, payload, version,
                                            opts);
}

void print_receipt(const chunkstore::protocol::WriteReceipt& receipt) {
  std::cout << "version=" << receipt.version.text()
            << " chunk_count=" << receipt.chunk_count
            << " path=" << to_string(receipt.path_taken)
            << " bytes=" << receipt.bytes_written << "\n";
}

int cmd_demo(const std::string& payload_path, const std::string& store_path,
             std::optional<std::uint64_t> chunk_size,
             std::optional<std::int64_t> at_millis) {
  const chunkstore::Bytes payload =
      chunkstore::Bytes::of(read_file(payload_path));
  chunkstore::kv::RegionStore store =
      load_or_create_store(store_path, /*must_exist=*/false);

  chunkstore::protocol::WriteOptions opts;
  if (chunk_size) opts.chunking.max_chunk_bytes = *chunk_size;

  const auto receipt = put_through_store(
      store, "demo", payload, at_millis ? *at_millis : now_millis(), opts);
  const auto result = chunkstore::protocol::read_entity(store, "demo");
  persist_store(store, store_path);
  print_receipt(receipt);
  if (result.payload != payload) {
    std::cerr << "round-trip mismatch: read " << result.payload.size()
              << " bytes that differ from the input\n";
    return kExitInternal;
  }
  std::cout << "verified: read back " << result.payload.size()
            << " bytes, fallback_depth=" << result.fallback_depth << "\n";
  return kExitOk;
}

int cmd_store_put(const std::string& store_path, const std::string& entity_id,
                  const std::string& in_path,
                  std::optional<std::int64_t> at_millis) {
  chunkstore::kv::RegionStore store =
      load_or_create_store(store_path, /*must_exist=*/false);
  const chunkstore::Bytes payload = chunkstore::Bytes::of(read_file(in_path));
  const auto receipt =
      put_through_store(store, entity_id, payload,
                        at_millis ? *at_millis : now_millis(), {});
  persist_store(store, store_path);
  print_receipt(receipt);
  return kExitOk;
}

int cmd_store_get(const std::string& store_path, const std::string& entity_id,
                  const std::string& out_path) {
  const chunkstore::kv::RegionStore store =
      load_or_create_store(store_path, /*must_exist=*/true);
  const auto result = chunkstore::protocol::read_entity(store, entity_id);
  write_file(out_path, result.payload.view());
  std::cout << "version=" << result.version.text()
            << " fallback_depth=" << result.fallback_depth
            << " bytes=" << result.payload.size() << "\n";
  return kExitOk;
}

int cmd_gc(const std::string& store_path, const std::string& entity_id,
           std::uint64_t keep) {
  chunkstore::kv::RegionStore store =
      load_or_create_store(store_path, /*must_exist=*/true);
  const std::uint64_t deleted =
      chunkstore::protocol::gc_versions(store, entity_id, keep);
  persist_store(store, store_path);
  std::cout << "deleted " << deleted << " records\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chunked-object storage protocol and replication simulator"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "run the two-region replication experiment");
  std::optional<std::string> config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  simulate->add_option("--config", config_path, "experiment config (JSON)");
  simulate->add_option("--out", out_dir, "output directory");
  simulate->add_option("--seed", seed, "override the config seed");
  simulate->add_option("--set", overrides,
                       "override a config field, e.g. --set pattern=pointer");

  // calibrate
  auto* calibrate = app.add_subcommand(
      "calibrate", "fit a lag model to p50/p95/p99 latency targets");
  double p50 = 0, p95 = 0, p99 = 0;
  std::string calibrate_out = "lag_model.json";
  calibrate->add_option("p50", p50, "target median, seconds")->required();
  calibrate->add_option("p95", p95, "target p95, seconds")->required();
  calibrate->add_option("p99", p99, "target p99, seconds")->required();
  calibrate->add_option("--out", calibrate_out, "output path");

  // demo
  auto* demo = app.add_subcommand(
      "demo", "write a file through the protocol and read it back");
  std::string payload_path;
  std::string demo_store = "demo_store.ndjson";
  std::optional<std::uint64_t> chunk_size;
  std::optional<std::int64_t> at_millis;
  demo->add_option("payload", payload_path, "payload file")->required();
  demo->add_option("--store", demo_store, "store snapshot path");
  demo->add_option("--chunk-size", chunk_size, "max chunk bytes");
  demo->add_option("--at-millis", at_millis,
                   "fixed clock reading for reproducible versions");

  // store-put / store-get / gc
  auto* store_put = app.add_subcommand("store-put",
                                       "write an entity from a file");
  std::string sp_store, sp_id, sp_in;
  std::optional<std::int64_t> sp_millis;
  store_put->add_option("--store", sp_store, "store snapshot path")->required();
  store_put->add_option("--id", sp_id, "entity id")->required();
  store_put->add_option("--in", sp_in, "input payload file")->required();
  store_put->add_option("--at-millis", sp_millis, "fixed clock reading");

  auto* store_get = app.add_subcommand("store-get",
                                       "materialize an entity to a file");
  std::string sg_store, sg_id, sg_out;
  store_get->add_option("--store", sg_store, "store snapshot path")->required();
  store_get->add_option("--id", sg_id, "entity id")->required();
  store_get->add_option("--out", sg_out, "output payload file")->required();

  auto* gc = app.add_subcommand("gc", "drop old versions of an entity");
  std::string gc_store, gc_id;
  std::uint64_t gc_keep = 1;
  gc->add_option("--store", gc_store, "store snapshot path")->required();
  gc->add_option("--id", gc_id, "entity id")->required();
  gc->add_option("--keep", gc_keep, "committed versions to keep")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed())
      return cmd_simulate(config_path, out_dir, seed, overrides);
    if (calibrate->parsed()) {
      if (!(0 < p50 && p50 < p95 && p95 < p99)) {
        std::cerr << "targets must satisfy 0 < p50 < p95 < p99\n";
        return kExitConfig;
      }
      return cmd_calibrate(p50, p95, p99, calibrate_out);
    }
    if (demo->parsed())
      return cmd_demo(payload_path, demo_store, chunk_size, at_millis);
    if (store_put->parsed())
      return cmd_store_put(sp_store, sp_id, sp_in, sp_millis);
    if (store_get->parsed()) return cmd_store_get(sg_store, sg_id, sg_out);
    if (gc->parsed()) return cmd_gc(gc_store, gc_id, gc_keep);
  } catch (const chunkstore::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitConfig;
}
