#include "doctest.h"
#include "zc/traffic.hpp"

#include <stdexcept>
#include <cmath>

TEST_SUITE_BEGIN("traffic");

namespace {

// Count arrivals in [0, horizon] by walking next_arrival.
int count_arrivals(const zc::TrafficSource& src, double horizon_us) {
  int n = 0;
  double now = 0;
  for (;;) {
    const auto a = zc::next_arrival(src, now);
    if (!a || a->time_us > horizon_us) break;
    ++n;
    // step half a period past the arrival; a tiny epsilon would fall below
    // double resolution at large wall times
    now = a->time_us + src.period_us / 2;
  }
  return n;
}

}  // namespace

TEST_CASE("backlogged sources always have a packet ready") {
  zc::TrafficSource src;
  src.kind = zc::TrafficKind::Backlogged;
  src.packet_bytes = 1500;
  for (double now : {0.0, 17.3, 1e9}) {
    const auto a = zc::next_arrival(src, now);
    REQUIRE(a.has_value());
    CHECK(a->time_us == doctest::Approx(now));
    CHECK(a->bytes == 1500);
  }
}

TEST_CASE("periodic source emits floor((T - offset)/period) + 1 packets") {
  for (double period : {100.0, 333.0, 30000.0}) {
    for (double offset : {0.0, 1.0, 99.0, period / 2}) {
      zc::TrafficSource src;
      src.kind = zc::TrafficKind::PeriodicCbr;
      src.period_us = period;
      src.start_offset_us = offset;
      for (double horizon : {10 * period, 10 * period + offset, 123456.0}) {
        if (horizon < offset) continue;
        const int expect =
            static_cast<int>(std::floor((horizon - offset) / period)) + 1;
        CHECK(count_arrivals(src, horizon) == expect);
      }
    }
  }
}

TEST_CASE("periodic arrival times land exactly on the grid") {
  zc::TrafficSource src;
  src.kind = zc::TrafficKind::PeriodicCbr;
  src.period_us = 250;
  src.start_offset_us = 40;
  CHECK(zc::next_arrival(src, 0)->time_us == doctest::Approx(40));
  CHECK(zc::next_arrival(src, 40)->time_us == doctest::Approx(40));
  CHECK(zc::next_arrival(src, 40.0001)->time_us == doctest::Approx(290));
  CHECK(zc::next_arrival(src, 1000)->time_us == doctest::Approx(1040));
}

TEST_CASE("offered load of a periodic source is exact") {
  zc::TrafficSource src;
  src.kind = zc::TrafficKind::PeriodicCbr;
  src.packet_bytes = 240;
  src.period_us = 30000;
  // bits per microsecond over a long horizon vs the closed form.
  const double horizon = 3e8;  // 300 s
  const double bits = 8.0 * src.packet_bytes * count_arrivals(src, horizon);
  const double load = bits / horizon;
  CHECK(load == doctest::Approx(8.0 * 240 / 30000).epsilon(1e-4));
}

TEST_CASE("periodic source with a non-positive period is rejected") {
  zc::TrafficSource src;
  src.kind = zc::TrafficKind::PeriodicCbr;
  src.period_us = 0;
  CHECK_THROWS_AS(zc::next_arrival(src, 0), std::invalid_argument);
}

TEST_SUITE_END();
