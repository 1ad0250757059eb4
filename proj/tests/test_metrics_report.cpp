#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "wsnsim/metrics.hpp"
#include "wsnsim/report.hpp"

using namespace wsnsim;

namespace {

constexpr auto ms = SimTime::millis;

// Two nodes, 10 s; four packets with hand-picked fates.
RunTrace sample_trace() {
  RunTrace t;
  t.nodes = 2;
  t.run_length = SimTime::seconds(10);
  t.ledger = NeighborLedger(2);
  auto& b = t.packets;
  const auto p0 = b.create(0, 1, ms(1000), 512);
  const auto p1 = b.create(0, 1, ms(2000), 512);
  const auto p2 = b.create(0, 1, ms(3000), 512);
  b.create(0, 1, ms(4000), 512);
  b.deliver(p0, ms(1100));
  b.deliver(p1, ms(2300));
  b.drop(p2, 0, DropReason::kNoRoute, ms(6000));  // never left the origin
  t.frames_sent = 20;
  t.collisions = 3;
  t.ledger.record(0, 1, ms(50));
  t.true_pairs = {{0, 1}, {1, 0}};
  EnergyLedger e(2, PowerProfile{});
  e.accrue_state(0, RadioState::kListen, SimTime::seconds(1));
  e.accrue_state(0, RadioState::kSleep, SimTime::seconds(9));
  e.accrue_state(1, RadioState::kSleep, SimTime::seconds(10));
  t.energy = {e.node(0), e.node(1)};
  return t;
}

}  // namespace

TEST_CASE("packet book settles each packet once") {
  PacketBook b;
  const auto p = b.create(0, 1, SimTime{}, 8);
  CHECK(b.in_flight() == 1);
  b.deliver(p, ms(1));
  CHECK_THROWS_AS(b.deliver(p, ms(2)), std::logic_error);
  CHECK_THROWS_AS(b.drop(p, 0, DropReason::kLinkBreak, ms(2)), std::logic_error);
  DataPacket ghost;
  ghost.id = 99;
  CHECK_THROWS_AS(b.deliver(ghost, ms(1)), std::logic_error);
  CHECK(b.sent() == b.delivered() + b.dropped() + b.in_flight());
}

TEST_CASE("metric arithmetic") {
  const auto t = sample_trace();
  const auto m = compute_metrics(t);
  CHECK(m.sent == 4);
  CHECK(m.delivered == 2);
  CHECK(m.dropped == 1);
  CHECK(m.in_flight == 1);
  CHECK(*m.pdr == doctest::Approx(0.5));
  CHECK(m.throughput_bps == doctest::Approx(1024.0 / 10.0));
  CHECK(*m.mean_delay_s == doctest::Approx((0.1 + 0.3) / 2));
  CHECK(*m.p95_delay_s == doctest::Approx(0.3));  // nearest rank: ceil(0.95 * 2) = 2nd
  // Collisions only: the origin's no_route drop is not a channel error.
  CHECK(m.error_rate == doctest::Approx(3.0 / 20.0));
  CHECK(m.discovery_rate == doctest::Approx(0.1));
  CHECK(*m.discovery_completeness == doctest::Approx(0.5));
  // 45 mW x 1 s + 0.09 mW x 9 s + 0.09 mW x 10 s
  CHECK(m.total_joules == doctest::Approx(0.045 + 0.00081 + 0.0009));
  CHECK(*m.energy_per_delivered_bit == doctest::Approx(m.total_joules / 1024.0));
  CHECK(m.per_node[0].awake_fraction == doctest::Approx(0.1));
  CHECK(m.per_node[0].neighbors_discovered == 1);
  CHECK(*mean_delay_since(t, ms(1500)) == doctest::Approx(0.3));
  CHECK_FALSE(mean_delay_since(t, ms(5000)));
}

TEST_CASE("pdr is null with no traffic") {
  RunTrace t;
  t.run_length = SimTime::seconds(1);
  const auto m = compute_metrics(t);
  CHECK_FALSE(m.pdr);
  CHECK_FALSE(m.mean_delay_s);
  CHECK_FALSE(m.discovery_completeness);
  CHECK_FALSE(m.energy_per_delivered_bit);
}

TEST_CASE("p95 nearest rank over twenty delays") {
  RunTrace t;
  t.run_length = SimTime::seconds(100);
  for (int i = 1; i <= 20; ++i) {
    const auto p = t.packets.create(0, 1, SimTime{}, 8);
    t.packets.deliver(p, ms(10 * i));
  }
  CHECK(*compute_metrics(t).p95_delay_s == doctest::Approx(0.19));  // 19th of 20
}

TEST_CASE("json report shape") {
  const auto m = compute_metrics(sample_trace());
  const auto j = nlohmann::json::parse(report_json(m, "demo", 7));
  CHECK(j["scenario"] == "demo");
  CHECK(j["seed"] == 7);
  CHECK(j["summary"]["pdr"] == 0.5);
  CHECK(j["summary"]["sent"] == 4);
  CHECK(j["summary"].size() == scalar_metrics(m).size());
  REQUIRE(j["nodes"].size() == 2);
  CHECK(j["nodes"][0]["listen_s"] == 1.0);
  CHECK(j["nodes"][1]["sleep_s"] == 10.0);

  RunTrace quiet;
  quiet.run_length = SimTime::seconds(1);
  const auto q = nlohmann::json::parse(report_json(compute_metrics(quiet), "q", 1));
  CHECK(q["summary"]["pdr"].is_null());
}

TEST_CASE("csv report has one row per node plus a summary") {
  const auto csv = report_csv(compute_metrics(sample_trace()));
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(csv);
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0].rfind("row,node,tx_s", 0) == 0);
  CHECK(lines[1].rfind("node,0,", 0) == 0);
  CHECK(lines[3].rfind("summary,", 0) == 0);
  const auto cols = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  for (const auto& l : lines) CHECK(cols(l) == cols(lines[0]));
}

TEST_CASE("aggregate uses the sample standard deviation and skips nulls") {
  MetricsReport a, b, c;
  a.sent = 2;
  b.sent = 4;
  c.sent = 9;
  a.pdr = 1.0;
  b.pdr = 0.5;
  const auto agg = aggregate({a, b, c});
  const auto sent = std::find_if(agg.begin(), agg.end(), [](const auto& x) { return x.name == "sent"; });
  CHECK(sent->count == 3);
  CHECK(sent->mean == doctest::Approx(5.0));
  CHECK(sent->stddev == doctest::Approx(std::sqrt(13.0)));  // ((9 + 1 + 16) / 2)
  const auto pdr = std::find_if(agg.begin(), agg.end(), [](const auto& x) { return x.name == "pdr"; });
  CHECK(pdr->count == 2);
  CHECK(pdr->mean == doctest::Approx(0.75));
  const auto j = nlohmann::json::parse(aggregate_json(agg, 3));
  CHECK(j["runs"] == 3);
  CHECK(j["metrics"]["sent"]["mean"] == 5.0);
  CHECK(aggregate_csv(agg).rfind("metric,count,mean,stddev\n", 0) == 0);
}

TEST_CASE("comparison table lists every metric per mode") {
  MetricsReport a, b;
  a.sent = 3;
  const auto table = comparison_table({{"left", a}, {"right", b}});
  CHECK(table.find("left") != std::string::npos);
  CHECK(table.find("right") != std::string::npos);
  CHECK(table.find("total_joules") != std::string::npos);
  CHECK(std::count(table.begin(), table.end(), '\n') == 1 + static_cast<long>(scalar_metrics(a).size()));
}

TEST_CASE("writing into a missing directory is an I/O error") {
  CHECK_THROWS_AS(write_file("/nonexistent-dir/x/report.json", "{}"), IoError);
}
