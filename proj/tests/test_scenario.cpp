#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wsnsim/scenario.hpp"

using namespace wsnsim;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

template <class Err>
Err error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Err& e) {
    return e;
  }
  FAIL("expected an error for: " << text);
  throw;
}

}  // namespace

TEST_CASE("an empty scenario takes the defaults") {
  const auto c = parse_scenario("# nothing here\n\n");
  CHECK(c == ScenarioConfig{});
  CHECK(c.nodes == 20);
  CHECK(c.arena.width == 500.0);
  CHECK(c.range == 100.0);
  CHECK(c.run == SimTime::seconds(60));
  CHECK(c.mac.mode == MacMode::kHmac);
  CHECK(c.mode == DiscoveryMode::kAomdv);
}

TEST_CASE("keys, stanzas and trailing comments") {
  const auto c = parse_scenario(R"(
nodes = 3          # three
arena = 300 200
run = 12.5
mode = dsr
mac = always_on
power.tx = 52.5
node.0 = 10 10
node.1 = 60 10 mobile
node.2 = 110 10
flow.0 = 0 2
flow.0.rate = 4
flow.0.payload = 256
flow.0.stop = 9
fail.0 = 1 5
route.0 = 0 2 1 2
)");
  CHECK(c.nodes == 3);
  CHECK(c.arena.height == 200.0);
  CHECK(c.run == SimTime::micros(12'500'000));
  CHECK(c.mode == DiscoveryMode::kDsr);
  CHECK(c.mac.mode == MacMode::kAlwaysOn);
  CHECK(c.power.tx_uw == 52'500);
  CHECK(c.placements.at(1).mobile);
  REQUIRE(c.flows.size() == 1);
  CHECK(c.flows[0].interval() == SimTime::millis(250));
  CHECK(c.flows[0].payload_bits == 256);
  CHECK(c.flows[0].stop == SimTime::seconds(9));
  CHECK(c.failures.at(0) == FailureSpec{1, SimTime::seconds(5)});
  CHECK(c.static_routes.at(0) == StaticRouteSpec{0, 2, 1, 2});
}

TEST_CASE("syntax errors carry the line number") {
  CHECK(error_of<SyntaxError>("nodes = 4\nrange 100\n").line() == 2);
  CHECK(error_of<SyntaxError>("run = 1\nrun = 2\n").line() == 2);
  CHECK(error_of<SyntaxError>("\n\nrange = far\n").line() == 3);
  CHECK(error_of<SyntaxError>("run = 0.0000001\n").line() == 1);
  CHECK(error_of<SyntaxError>("power.tx = 1.0001\n").line() == 1);
}

TEST_CASE("config errors name the field") {
  CHECK(error_of<ConfigError>("warp = 9\n").field() == "warp");
  CHECK(error_of<ConfigError>("mode = carrier_pigeon\n").field() == "mode");
  CHECK(error_of<ConfigError>("range = 0\n").field() == "range");
  CHECK(error_of<ConfigError>("nodes = 2\nflow.0 = 0 5\n").field() == "flow.0");
  CHECK(error_of<ConfigError>("flow.3.rate = 2\n").field() == "flow.3");
  CHECK(error_of<ConfigError>("nodes = 2\nnode.0 = 1 1\n").field() == "node.1");
  CHECK(error_of<ConfigError>("mac.islot = 0.001\n").field() == "mac.islot");
  CHECK(error_of<ConfigError>("power.sleep = 50\n").field() == "power");
  CHECK(error_of<ConfigError>("flow.0 = 0 1\nflow.0.payload = 100000\n").field() == "flow.0.payload");
  CHECK(error_of<ConfigError>("nodes = 2\nfail.0 = 4 1\n").field() == "fail.0");
}

TEST_CASE("frame fit check applies only under hmac") {
  CHECK_NOTHROW(parse_scenario("mac = always_on\nflow.0 = 0 1\nflow.0.payload = 100000\n"));
}

TEST_CASE("emit then parse round-trips") {
  ScenarioConfig c;
  c.nodes = 5;
  c.arena = Arena{123.25, 77.5};
  c.range = 42.125;
  c.mobile_fraction = 0.4;
  c.mobility = MobilityParams{0.5, 2.75};
  c.mobility_step = SimTime::millis(250);
  c.mac.mode = MacMode::kAlwaysOn;
  c.mac.n_islots = 7;
  c.mac.broadcast_defer_frames = 2;
  c.mode = DiscoveryMode::kHello;
  c.hello_talk_prob = 0.125;
  c.routing.rreq_retries = 4;
  c.routing.ad.dsr = 7;
  c.power.sleep_uw = 1;
  c.flows.push_back(FlowSpec{0, 4, SimTime::millis(1500), 2.5, 640, SimTime::seconds(20)});
  c.flows.emplace_back().origin = 3;
  c.flows.back().destination = 1;
  c.failures.push_back(FailureSpec{2, SimTime::millis(7001)});
  c.static_routes.push_back(StaticRouteSpec{0, 4, 1, 3});
  c.run = SimTime::micros(30'000'001);
  c.seed = 18446744073709551615ULL;
  const std::string text = emit_scenario(c);
  CHECK(parse_scenario(text) == c);
  CHECK(emit_scenario(parse_scenario(text)) == text);
}

TEST_CASE("bundled scenarios parse and round-trip") {
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(WSNSIM_SCENARIO_DIR)) {
    if (entry.path().extension() != ".scen") continue;
    ++seen;
    CAPTURE(entry.path().filename().string());
    const auto c = parse_scenario(slurp(entry.path()));
    CHECK(parse_scenario(emit_scenario(c)) == c);
  }
  CHECK(seen == 9);
}
