#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "hicu/error.hpp"
#include "hicu/metrics.hpp"
#include "support/oracles.hpp"

using namespace hicu;
using hicu::testing::random_kspace;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<TraceRecord> trace_of(const std::vector<double>& snr, const std::vector<double>& t) {
  std::vector<TraceRecord> out;
  for (std::size_t i = 0; i < snr.size(); ++i) out.push_back({t[i], 1, int(i), 1.0, 0.1, snr[i]});
  return out;
}

}  // namespace

TEST(Snr, SentinelAndAnalyticValues) {
  const auto y = random_kspace(8, 8, 2, 1);
  EXPECT_EQ(snr_db(y, y), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(snr_db(MultiCoilKSpace(8, 8, 2), y), 0.0, 1e-12);
  auto e = random_kspace(8, 8, 2, 2);
  e *= 0.1 * y.norm() / e.norm();
  EXPECT_NEAR(snr_db(y + e, y), 20.0, 1e-10);
  const SnrReport rep = snr_report(y + e, y, "truth.ksp");
  EXPECT_NEAR(rep.nmse, 0.01, 1e-12);
  EXPECT_EQ(rep.against, "truth.ksp");
}

TEST(Snr, ScaleInvariantAndSymmetricInError) {
  const auto y = random_kspace(6, 6, 1, 3);
  const auto e = random_kspace(6, 6, 1, 4);
  auto y2 = y, e2 = e;
  y2 *= 3.0;
  e2 *= 3.0;
  EXPECT_NEAR(snr_db(y + e, y), snr_db(y2 + e2, y2), 1e-10);
  EXPECT_NEAR(snr_db(y + e, y), snr_db(y - e, y), 1e-10);
}

TEST(Snr, Errors) {
  const MultiCoilKSpace zero(4, 4, 1);
  EXPECT_EQ(snr_db(zero, zero), std::numeric_limits<double>::infinity());
  EXPECT_THROW(snr_db(random_kspace(4, 4, 1, 5), zero), ConfigError);
  EXPECT_THROW(snr_db(random_kspace(4, 4, 1, 5), random_kspace(4, 4, 2, 5)), DimensionError);
}

TEST(Trace, Summaries) {
  const TraceSummary s = summarize_trace(trace_of({10, 12, 11}, {1, 2, 3}));
  EXPECT_EQ(s.peak_snr_db, 12.0);
  EXPECT_EQ(s.time_to_peak, 2.0);
  EXPECT_EQ(s.peak_index, 1u);
  EXPECT_EQ(s.final_snr_db, 11.0);

  const TraceSummary up = summarize_trace(trace_of({1, 2, 3, 4}, {0, 1, 2, 3}));
  EXPECT_EQ(up.peak_snr_db, up.final_snr_db);

  const TraceSummary one = summarize_trace(trace_of({7.5}, {0.25}));
  EXPECT_EQ(one.peak_snr_db, 7.5);
  EXPECT_EQ(one.time_to_peak, 0.25);
  EXPECT_EQ(one.final_snr_db, 7.5);

  const TraceSummary tie = summarize_trace(trace_of({5, 6, 6, kNaN}, {0, 1, 2, 3}));
  EXPECT_EQ(tie.peak_index, 1u);
  EXPECT_EQ(tie.final_snr_db, 6.0);

  EXPECT_THROW(summarize_trace({}), ConfigError);
  EXPECT_THROW(summarize_trace(trace_of({kNaN, kNaN}, {0, 1})), ConfigError);
}

TEST(Trace, CsvRoundTrip) {
  std::vector<TraceRecord> recs = {{0.0, 0, 0, kNaN, 0.0, 3.5},
                                   {0.125, 1, 1, 12.25, 0.0625, 1.0 / 3.0},
                                   {0.5, 2, 10, 1e-300, 7.0, std::numeric_limits<double>::infinity()},
                                   {0.75, 2, 11, 2.0, 0.5, kNaN}};
  const std::string csv = trace_to_csv(recs);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "wall_time_s,outer,inner,cost,eta,snr_db");
  const auto back = trace_from_csv(csv);
  ASSERT_EQ(back.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(back[i].wall_time, recs[i].wall_time);
    EXPECT_EQ(back[i].outer, recs[i].outer);
    EXPECT_EQ(back[i].inner, recs[i].inner);
    EXPECT_EQ(back[i].eta, recs[i].eta);
    if (std::isnan(recs[i].compressed_cost)) {
      EXPECT_TRUE(std::isnan(back[i].compressed_cost));
    } else {
      EXPECT_EQ(back[i].compressed_cost, recs[i].compressed_cost);
    }
    if (std::isnan(recs[i].snr_db)) {
      EXPECT_TRUE(std::isnan(back[i].snr_db));
    } else {
      EXPECT_EQ(back[i].snr_db, recs[i].snr_db);
    }
  }
  EXPECT_THROW(trace_from_csv("time,a,b\n"), IoError);
  EXPECT_THROW(trace_from_csv("wall_time_s,outer,inner,cost,eta,snr_db\n1,2,3\n"), IoError);
  EXPECT_THROW(trace_from_csv("wall_time_s,outer,inner,cost,eta,snr_db\n1,2,x,4,5,6\n"), IoError);
}
