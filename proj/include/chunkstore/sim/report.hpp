// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <charconv>
#include <cstdio>
#include <string>

#include "chunkstore/error.hpp"
#include "chunkstore/sim/experiment.hpp"

namespace chunkstore::sim {

namespace detail {

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Shortest text that parses back to exactly the same double.
inline std::string roundtrip(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline std::string percent(double ratio) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f%%", ratio * 100.0);
  return buf;
}

inline double quantile_or_zero(const SimMetrics& m, double q) {
  return m.ttc_samples_seconds.empty() ? 0.0 : percentile(m.ttc_samples_seconds, q);
}

}  // namespace detail

struct Report {
  std::string text;
  std::string csv;
};

inline std::string metrics_csv_row(Pattern pattern, const SimMetrics& m) {
  std::string row;
  row += to_string(pattern);
  row += ',';
  row += detail::fixed6(detail::quantile_or_zero(m, 0.50));
  row += ',';
  row += detail::fixed6(detail::quantile_or_zero(m, 0.95));
  row += ',';
  row += detail::fixed6(detail::quantile_or_zero(m, 0.99));
  row += ',';
  row += detail::fixed6(m.max_ttc_seconds);
  row += ',';
  row += std::to_string(m.probe_total);
  row += ',';
  row += std::to_string(m.probe_404);
  row += ',';
  row += detail::roundtrip(m.error_rate());
  row += '\n';
  return row;
}

inline constexpr std::string_view kMetricsCsvHeader =
    "pattern,p50,p95,p99,max,probes,errors,error_rate\n";

/// Side-by-side comparison of the two patterns: time-to-consistency
/// quantiles, replication-gap deltas and secondary-region read failures,
/// plus the per-pattern CSV rows.
inline Report render_report(const SimMetrics& chunked,
                            const SimMetrics& pointer) {
  Report out;

  auto line = [&](const std::string& label, const std::string& c,
                  const std::string& p) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-28s %16s %16s\n", label.c_str(),
                  c.c_str(), p.c_str());
    out.text += buf;
  };

  out.text += "secondary-region consistency, chunked vs pointer\n";
  out.text += "\n";
  line("metric", "chunked", "pointer");
  line("replication model", "unified", "decoupled");
  line("writes measured", std::to_string(chunked.ttc_samples_seconds.size()),
       std::to_string(pointer.ttc_samples_seconds.size()));
  line("ttc p50 (s)", detail::fixed6(detail::quantile_or_zero(chunked, 0.50)),
       detail::fixed6(detail::quantile_or_zero(pointer, 0.50)));
  line("ttc p95 (s)", detail::fixed6(detail::quantile_or_zero(chunked, 0.95)),
       detail::fixed6(detail::quantile_or_zero(pointer, 0.95)));
  line("ttc p99 (s)", detail::fixed6(detail::quantile_or_zero(chunked, 0.99)),
       detail::fixed6(detail::quantile_or_zero(pointer, 0.99)));
  line("max ttc (s)", detail::fixed6(chunked.max_ttc_seconds),
       detail::fixed6(pointer.max_ttc_seconds));
  line("avg lag delta (s)", detail::fixed6(chunked.avg_lag_delta_seconds),
       detail::fixed6(pointer.avg_lag_delta_seconds));
  line("avg lag delta, clamped (s)",
       detail::fixed6(chunked.avg_lag_delta_clamped_seconds),
       detail::fixed6(pointer.avg_lag_delta_clamped_seconds));
  line("p99 lag delta (s)", detail::fixed6(chunked.p99_lag_delta_seconds),
       detail::fixed6(pointer.p99_lag_delta_seconds));
  line("probes", std::to_string(chunked.probe_total),
       std::to_string(pointer.probe_total));
  line("404 errors", std::to_string(chunked.probe_404),
       std::to_string(pointer.probe_404));
  line("404 error rate", detail::percent(chunked.error_rate()),
       detail::percent(pointer.error_rate()));

  out.csv = std::string(kMetricsCsvHeader);
  out.csv += metrics_csv_row(Pattern::chunked, chunked);
  out.csv += metrics_csv_row(Pattern::pointer, pointer);
  return out;
}

/// Single-pattern variant for runs that exercise only one write path.
inline Report render_report(Pattern pattern, const SimMetrics& metrics) {
  Report out;
  auto line = [&](const std::string& label, const std::string& v) {
    char buf[120];
    std::snprintf(buf, sizeof buf, "  %-28s %16s\n", label.c_str(), v.c_str());
    out.text += buf;
  };
  out.text += "secondary-region consistency, pattern ";
  out.text += to_string(pattern);
  out.text += "\n\n";
  line("writes measured", std::to_string(metrics.ttc_samples_seconds.size()));
  line("ttc p50 (s)", detail::fixed6(detail::quantile_or_zero(metrics, 0.50)));
  line("ttc p95 (s)", detail::fixed6(detail::quantile_or_zero(metrics, 0.95)));
  line("ttc p99 (s)", detail::fixed6(detail::quantile_or_zero(metrics, 0.99)));
  line("max ttc (s)", detail::fixed6(metrics.max_ttc_seconds));
  line("avg lag delta (s)", detail::fixed6(metrics.avg_lag_delta_seconds));
  line("avg lag delta, clamped (s)",
       detail::fixed6(metrics.avg_lag_delta_clamped_seconds));
  line("p99 lag delta (s)", detail::fixed6(metrics.p99_lag_delta_seconds));
  line("probes", std::to_string(metrics.probe_total));
  line("404 errors", std::to_string(metrics.probe_404));
  line("404 error rate", detail::percent(metrics.error_rate()));
  out.csv = std::string(kMetricsCsvHeader);
  out.csv += metrics_csv_row(pattern, metrics);
  return out;
}

}  // namespace chunkstore::sim
