#pragma once

#include <string>
#include <vector>

#include "hicu/kspace.hpp"

namespace hicu {

struct SnrReport {
  /// 20 log10(||Y|| / ||Y_hat - Y||); +inf for an exact match.
  double snr_db = 0.0;
  /// ||Y_hat - Y||^2 / ||Y||^2
  double nmse = 0.0;
  std::string against;
};

/// Signal-over-error SNR in dB. Throws DimensionError on shape mismatch and
/// ConfigError when the reference is zero and the estimate differs from it.
double snr_db(const MultiCoilKSpace& estimate, const MultiCoilKSpace& reference);

SnrReport snr_report(const MultiCoilKSpace& estimate, const MultiCoilKSpace& reference,
                     std::string against = {});

struct TraceRecord {
  double wall_time = 0.0;
  int outer = 0;
  int inner = 0;
  double compressed_cost = 0.0;
  double eta = 0.0;
  /// NaN when no reference was given.
  double snr_db = 0.0;
};

struct TraceSummary {
  double peak_snr_db = 0.0;
  double time_to_peak = 0.0;
  std::size_t peak_index = 0;
  double final_snr_db = 0.0;
};

/// Peak SNR (first occurrence), its wall time, and the last SNR. Records
/// without an SNR are skipped; throws ConfigError if none has one.
TraceSummary summarize_trace(const std::vector<TraceRecord>& records);

/// CSV with header wall_time_s,outer,inner,cost,eta,snr_db.
std::string trace_to_csv(const std::vector<TraceRecord>& records);
std::vector<TraceRecord> trace_from_csv(const std::string& text);

}  // namespace hicu
