#include "hicu/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hicu/error.hpp"

namespace hicu {

SnrReport snr_report(const MultiCoilKSpace& estimate, const MultiCoilKSpace& reference,
                     std::string against) {
  if (!estimate.same_shape(reference)) throw DimensionError("estimate and reference differ in shape");
  const double err = (estimate - reference).squared_norm();
  SnrReport r;
  r.against = std::move(against);
  if (err == 0.0) {
    r.nmse = 0.0;
    r.snr_db = std::numeric_limits<double>::infinity();
    return r;
  }
  const double sig = reference.squared_norm();
  if (sig == 0.0) throw ConfigError("SNR is undefined against an all-zero reference");
  r.nmse = err / sig;
  r.snr_db = -10.0 * std::log10(r.nmse);
  return r;
}

double snr_db(const MultiCoilKSpace& estimate, const MultiCoilKSpace& reference) {
  return snr_report(estimate, reference).snr_db;
}

TraceSummary summarize_trace(const std::vector<TraceRecord>& records) {
  TraceSummary s;
  bool any = false;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (std::isnan(r.snr_db)) continue;
    if (!any || r.snr_db > s.peak_snr_db) {
      s.peak_snr_db = r.snr_db;
      s.time_to_peak = r.wall_time;
      s.peak_index = i;
    }
    s.final_snr_db = r.snr_db;
    any = true;
  }
  if (!any) throw ConfigError("trace has no records with an SNR");
  return s;
}

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double parse_number(const std::string& s) {
  if (s == "nan" || s.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return v;
}

}  // namespace

std::string trace_to_csv(const std::vector<TraceRecord>& records) {
  std::ostringstream os;
  os << "wall_time_s,outer,inner,cost,eta,snr_db\n";
  for (const auto& r : records) {
    os << format_number(r.wall_time) << ',' << r.outer << ',' << r.inner << ','
       << format_number(r.compressed_cost) << ',' << format_number(r.eta) << ','
       << format_number(r.snr_db) << '\n';
  }
  return os.str();
}

std::vector<TraceRecord> trace_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "wall_time_s,outer,inner,cost,eta,snr_db") {
    throw IoError("trace CSV has an unexpected header");
  }
  std::vector<TraceRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::vector<std::string> f;
    std::string cell;
    while (std::getline(fields, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    try {
      if (f.size() != 6) throw std::invalid_argument("field count");
      TraceRecord r;
      r.wall_time = parse_number(f[0]);
      r.outer = std::stoi(f[1]);
      r.inner = std::stoi(f[2]);
      r.compressed_cost = parse_number(f[3]);
      r.eta = parse_number(f[4]);
      r.snr_db = parse_number(f[5]);
      out.push_back(r);
    } catch (const std::exception&) {
      throw IoError("malformed trace CSV line " + std::to_string(lineno));
    }
  }
  return out;
}

}  // namespace hicu
