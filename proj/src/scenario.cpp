#include "wsnsim/scenario.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace wsnsim {

const char* to_string(DiscoveryMode m) {
  switch (m) {
    case DiscoveryMode::kAomdv: return "aomdv";
    case DiscoveryMode::kDsr: return "dsr";
    case DiscoveryMode::kHello: return "hello";
    case DiscoveryMode::kDisco: return "disco";
  }
  return "?";
}

std::optional<DiscoveryMode> parse_discovery_mode(std::string_view s) {
  if (s == "aomdv") return DiscoveryMode::kAomdv;
  if (s == "dsr") return DiscoveryMode::kDsr;
  if (s == "hello") return DiscoveryMode::kHello;
  if (s == "disco") return DiscoveryMode::kDisco;
  return std::nullopt;
}

SimTime FlowSpec::interval() const { return SimTime::micros(std::llround(1e6 / rate)); }

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  auto mac_eq = [](const MacParams& x, const MacParams& y) {
    return x.mode == y.mode && x.wslot_len == y.wslot_len && x.islot_len == y.islot_len && x.n_islots == y.n_islots &&
           x.bitrate == y.bitrate && x.jitter == y.jitter && x.broadcast_defer_frames == y.broadcast_defer_frames;
  };
  auto routing_eq = [](const RoutingParams& x, const RoutingParams& y) {
    return x.reply_wait == y.reply_wait && x.rreq_retries == y.rreq_retries && x.route_expiry == y.route_expiry &&
           x.link_fail_threshold == y.link_fail_threshold && x.ad.static_routes == y.ad.static_routes &&
           x.ad.aomdv == y.ad.aomdv && x.ad.dsr == y.ad.dsr;
  };
  auto power_eq = [](const PowerProfile& x, const PowerProfile& y) {
    return x.tx_uw == y.tx_uw && x.rx_uw == y.rx_uw && x.listen_uw == y.listen_uw && x.sleep_uw == y.sleep_uw;
  };
  return a.arena.width == b.arena.width && a.arena.height == b.arena.height && a.range == b.range &&
         a.nodes == b.nodes && a.placements == b.placements && a.mobile_fraction == b.mobile_fraction &&
         a.mobility.v_min == b.mobility.v_min && a.mobility.v_max == b.mobility.v_max &&
         a.mobility_step == b.mobility_step && mac_eq(a.mac, b.mac) && a.mode == b.mode &&
         a.hello_talk_prob == b.hello_talk_prob && a.hello_slot == b.hello_slot && a.disco_slot == b.disco_slot &&
         routing_eq(a.routing, b.routing) && power_eq(a.power, b.power) && a.flows == b.flows &&
         a.failures == b.failures && a.static_routes == b.static_routes && a.run == b.run && a.seed == b.seed;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

struct Line {
  int number;
  std::string key;
  std::string value;
};

double to_double(const Line& l, std::string_view v) {
  double d = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
  if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(d))
    throw SyntaxError(l.number, "expected a number for " + l.key + ", got '" + std::string(v) + "'");
  return d;
}

std::int64_t to_int(const Line& l, std::string_view v) {
  std::int64_t n = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw SyntaxError(l.number, "expected an integer for " + l.key + ", got '" + std::string(v) + "'");
  return n;
}

SimTime to_time(const Line& l, std::string_view v) {
  try {
    return parse_seconds(v);
  } catch (const std::invalid_argument& e) {
    throw SyntaxError(l.number, l.key + ": " + e.what());
  }
}

std::int64_t to_microwatts(const Line& l, std::string_view v) {
  const double mw = to_double(l, v);
  const double uw = mw * 1000.0;
  const auto r = std::llround(uw);
  if (std::fabs(uw - static_cast<double>(r)) > 1e-6)
    throw SyntaxError(l.number, l.key + ": power resolution is 0.001 mW");
  return r;
}

std::vector<std::string_view> fields(const Line& l, std::size_t min, std::size_t max) {
  auto w = words(l.value);
  if (w.size() < min || w.size() > max)
    throw SyntaxError(l.number, l.key + ": expected " + std::to_string(min) +
                                    (min == max ? "" : "-" + std::to_string(max)) + " fields");
  return w;
}

std::string fmt_double(double d) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
  (void)ec;
  return std::string(buf, p);
}

std::string fmt_mw(std::int64_t uw) {
  std::string s = std::to_string(uw / 1000);
  const auto frac = uw % 1000;
  if (frac != 0) {
    char buf[8];
    std::snprintf(buf, sizeof buf, ".%03lld", static_cast<long long>(frac));
    std::string f = buf;
    while (f.back() == '0') f.pop_back();
    s += f;
  }
  return s;
}

// Splits "flow.3.rate" into ("flow", 3, "rate").
bool indexed(std::string_view key, std::string_view prefix, std::int64_t& index, std::string& suffix) {
  if (key.substr(0, prefix.size()) != prefix || key.size() <= prefix.size() || key[prefix.size()] != '.')
    return false;
  std::string_view rest = key.substr(prefix.size() + 1);
  const auto dot = rest.find('.');
  const std::string_view num = rest.substr(0, dot);
  auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), index);
  if (ec != std::errc{} || p != num.data() + num.size() || num.empty()) return false;
  suffix = dot == std::string_view::npos ? "" : std::string(rest.substr(dot + 1));
  return true;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) {
  std::vector<Line> lines;
  std::set<std::string> seen;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string_view::npos) throw SyntaxError(number, "expected 'key = value'");
    Line l{number, std::string(trim(raw.substr(0, eq))), std::string(trim(raw.substr(eq + 1)))};
    if (l.key.empty()) throw SyntaxError(number, "missing key");
    if (l.value.empty()) throw SyntaxError(number, "missing value for " + l.key);
    if (!seen.insert(l.key).second) throw SyntaxError(number, "duplicate key " + l.key);
    lines.push_back(std::move(l));
  }

  ScenarioConfig cfg;
  struct FlowDraft {
    std::optional<FlowSpec> base;
    FlowSpec extra;
    std::set<std::string> set;
    int line = 0;
  };
  std::map<std::int64_t, FlowDraft> flows;
  std::map<std::int64_t, FailureSpec> failures;
  std::map<std::int64_t, StaticRouteSpec> routes;

  using Setter = std::function<void(const Line&)>;
  const std::map<std::string, Setter, std::less<>> simple = {
      {"nodes", [&](const Line& l) {
         const auto n = to_int(l, l.value);
         if (n < 0) throw ConfigError("nodes", "must be >= 1");
         cfg.nodes = static_cast<std::size_t>(n);
       }},
      {"arena", [&](const Line& l) {
         auto w = fields(l, 2, 2);
         cfg.arena = {to_double(l, w[0]), to_double(l, w[1])};
       }},
      {"range", [&](const Line& l) { cfg.range = to_double(l, l.value); }},
      {"run", [&](const Line& l) { cfg.run = to_time(l, l.value); }},
      {"seed", [&](const Line& l) {
         std::uint64_t s = 0;
         auto [p, ec] = std::from_chars(l.value.data(), l.value.data() + l.value.size(), s);
         if (ec != std::errc{} || p != l.value.data() + l.value.size())
           throw SyntaxError(l.number, "expected an unsigned integer for seed");
         cfg.seed = s;
       }},
      {"mode", [&](const Line& l) {
         auto m = parse_discovery_mode(l.value);
         if (!m) throw ConfigError("mode", "expected aomdv, dsr, hello or disco");
         cfg.mode = *m;
       }},
      {"mobility.fraction", [&](const Line& l) { cfg.mobile_fraction = to_double(l, l.value); }},
      {"mobility.vmin", [&](const Line& l) { cfg.mobility.v_min = to_double(l, l.value); }},
      {"mobility.vmax", [&](const Line& l) { cfg.mobility.v_max = to_double(l, l.value); }},
      {"mobility.step", [&](const Line& l) { cfg.mobility_step = to_time(l, l.value); }},
      {"mac", [&](const Line& l) {
         if (l.value == "hmac") {
           cfg.mac.mode = MacMode::kHmac;
         } else if (l.value == "always_on") {
           cfg.mac.mode = MacMode::kAlwaysOn;
         } else {
           throw ConfigError("mac", "expected hmac or always_on");
         }
       }},
      {"mac.wslot", [&](const Line& l) { cfg.mac.wslot_len = to_time(l, l.value); }},
      {"mac.islot", [&](const Line& l) { cfg.mac.islot_len = to_time(l, l.value); }},
      {"mac.islots", [&](const Line& l) { cfg.mac.n_islots = static_cast<int>(to_int(l, l.value)); }},
      {"mac.bitrate", [&](const Line& l) { cfg.mac.bitrate = to_int(l, l.value); }},
      {"mac.jitter", [&](const Line& l) { cfg.mac.jitter = to_time(l, l.value); }},
      {"mac.bcast_defer", [&](const Line& l) { cfg.mac.broadcast_defer_frames = static_cast<int>(to_int(l, l.value)); }},
      {"hello.talk_prob", [&](const Line& l) { cfg.hello_talk_prob = to_double(l, l.value); }},
      {"hello.slot", [&](const Line& l) { cfg.hello_slot = to_time(l, l.value); }},
      {"disco.slot", [&](const Line& l) { cfg.disco_slot = to_time(l, l.value); }},
      {"routing.reply_wait", [&](const Line& l) { cfg.routing.reply_wait = to_time(l, l.value); }},
      {"routing.rreq_retries", [&](const Line& l) { cfg.routing.rreq_retries = static_cast<int>(to_int(l, l.value)); }},
      {"routing.route_expiry", [&](const Line& l) { cfg.routing.route_expiry = to_time(l, l.value); }},
      {"routing.link_fail_threshold",
       [&](const Line& l) { cfg.routing.link_fail_threshold = static_cast<int>(to_int(l, l.value)); }},
      {"routing.ad.static", [&](const Line& l) { cfg.routing.ad.static_routes = static_cast<int>(to_int(l, l.value)); }},
      {"routing.ad.aomdv", [&](const Line& l) { cfg.routing.ad.aomdv = static_cast<int>(to_int(l, l.value)); }},
      {"routing.ad.dsr", [&](const Line& l) { cfg.routing.ad.dsr = static_cast<int>(to_int(l, l.value)); }},
      {"power.tx", [&](const Line& l) { cfg.power.tx_uw = to_microwatts(l, l.value); }},
      {"power.rx", [&](const Line& l) { cfg.power.rx_uw = to_microwatts(l, l.value); }},
      {"power.listen", [&](const Line& l) { cfg.power.listen_uw = to_microwatts(l, l.value); }},
      {"power.sleep", [&](const Line& l) { cfg.power.sleep_uw = to_microwatts(l, l.value); }},
  };

  for (const auto& l : lines) {
    if (auto it = simple.find(l.key); it != simple.end()) {
      it->second(l);
      continue;
    }
    std::int64_t idx = 0;
    std::string sub;
    if (indexed(l.key, "node", idx, sub) && sub.empty()) {
      auto w = fields(l, 2, 3);
      Placement p{to_double(l, w[0]), to_double(l, w[1]), false};
      if (w.size() == 3) {
        if (w[2] != "mobile") throw SyntaxError(l.number, l.key + ": third field must be 'mobile'");
        p.mobile = true;
      }
      cfg.placements[static_cast<NodeId>(idx)] = p;
    } else if (indexed(l.key, "flow", idx, sub)) {
      auto& d = flows[idx];
      if (sub.empty()) {
        auto w = fields(l, 2, 2);
        d.base = FlowSpec{};
        d.base->origin = static_cast<NodeId>(to_int(l, w[0]));
        d.base->destination = static_cast<NodeId>(to_int(l, w[1]));
        d.line = l.number;
      } else if (sub == "start") {
        d.extra.start = to_time(l, l.value);
      } else if (sub == "rate") {
        d.extra.rate = to_double(l, l.value);
      } else if (sub == "payload") {
        const auto b = to_int(l, l.value);
        if (b <= 0 || b > UINT32_MAX) throw ConfigError(l.key, "payload must be a positive bit count");
        d.extra.payload_bits = static_cast<std::uint32_t>(b);
      } else if (sub == "stop") {
        d.extra.stop = to_time(l, l.value);
      } else {
        throw ConfigError(l.key, "unknown key");
      }
      if (!sub.empty()) d.set.insert(sub);
    } else if (indexed(l.key, "fail", idx, sub) && sub.empty()) {
      auto w = fields(l, 2, 2);
      failures[idx] = FailureSpec{static_cast<NodeId>(to_int(l, w[0])), to_time(l, w[1])};
    } else if (indexed(l.key, "route", idx, sub) && sub.empty()) {
      auto w = fields(l, 4, 4);
      const auto hops = to_int(l, w[3]);
      if (hops < 1) throw ConfigError(l.key, "hop count must be >= 1");
      routes[idx] = StaticRouteSpec{static_cast<NodeId>(to_int(l, w[0])), static_cast<NodeId>(to_int(l, w[1])),
                                    static_cast<NodeId>(to_int(l, w[2])), static_cast<std::uint32_t>(hops)};
    } else {
      throw ConfigError(l.key, "unknown key");
    }
  }

  for (auto& [i, d] : flows) {
    const std::string name = "flow." + std::to_string(i);
    if (!d.base) throw ConfigError(name, "attributes given without 'flow.N = origin destination'");
    FlowSpec f = *d.base;
    if (d.set.contains("start")) f.start = d.extra.start;
    if (d.set.contains("rate")) f.rate = d.extra.rate;
    if (d.set.contains("payload")) f.payload_bits = d.extra.payload_bits;
    if (d.set.contains("stop")) f.stop = d.extra.stop;
    cfg.flows.push_back(f);
  }
  for (auto& [i, f] : failures) cfg.failures.push_back(f);
  for (auto& [i, r] : routes) cfg.static_routes.push_back(r);

  validate_scenario(cfg);
  return cfg;
}

void validate_scenario(const ScenarioConfig& c) {
  auto need = [](bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError(field, what);
  };
  const SimTime zero;
  need(c.nodes >= 1, "nodes", "must be >= 1");
  need(c.arena.width > 0 && c.arena.height > 0, "arena", "dimensions must be positive");
  need(c.range > 0, "range", "must be positive");
  need(c.run > zero, "run", "must be positive");
  need(c.mobile_fraction >= 0 && c.mobile_fraction <= 1, "mobility.fraction", "must lie in [0,1]");
  need(c.mobility.v_min > 0, "mobility.vmin", "must be positive");
  need(c.mobility.v_max >= c.mobility.v_min, "mobility.vmax", "must be >= mobility.vmin");
  need(c.mobility_step > zero, "mobility.step", "must be positive");

  need(c.mac.wslot_len > zero, "mac.wslot", "must be positive");
  need(c.mac.islot_len > c.mac.wslot_len, "mac.islot", "must be longer than mac.wslot");
  need(c.mac.n_islots >= 0, "mac.islots", "must be >= 0 (0 selects the default)");
  need(c.mac.bitrate > 0, "mac.bitrate", "must be positive");
  need(c.mac.jitter >= zero, "mac.jitter", "must be >= 0");
  need(c.mac.broadcast_defer_frames >= 1, "mac.bcast_defer", "must be >= 1");

  need(c.hello_talk_prob >= 0 && c.hello_talk_prob <= 1, "hello.talk_prob", "must lie in [0,1]");
  need(c.hello_slot > zero, "hello.slot", "must be positive");
  need(c.disco_slot > zero, "disco.slot", "must be positive");

  need(c.routing.reply_wait > zero, "routing.reply_wait", "must be positive");
  need(c.routing.rreq_retries >= 0, "routing.rreq_retries", "must be >= 0");
  need(c.routing.route_expiry > zero, "routing.route_expiry", "must be positive");
  need(c.routing.link_fail_threshold >= 1, "routing.link_fail_threshold", "must be >= 1");
  try {
    c.power.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("power", e.what());
  }

  const auto n = static_cast<NodeId>(c.nodes);
  auto valid = [&](NodeId id) { return id >= 0 && id < n; };
  if (!c.placements.empty()) {
    for (NodeId i = 0; i < n; ++i)
      need(c.placements.contains(i), "node." + std::to_string(i), "missing: explicit placement must cover every node");
    for (const auto& [id, p] : c.placements) {
      const std::string f = "node." + std::to_string(id);
      need(valid(id), f, "no such node (nodes = " + std::to_string(c.nodes) + ")");
      need(p.x >= 0 && p.x <= c.arena.width && p.y >= 0 && p.y <= c.arena.height, f, "outside the arena");
    }
  }
  const std::int64_t source_route_bits =
      c.mode == DiscoveryMode::kDsr ? static_cast<std::int64_t>(FrameSizes::kDsrPerHop * c.nodes) : 0;
  for (std::size_t i = 0; i < c.flows.size(); ++i) {
    const auto& f = c.flows[i];
    const std::string name = "flow." + std::to_string(i);
    need(valid(f.origin), name, "origin " + std::to_string(f.origin) + " is not a node");
    need(valid(f.destination), name, "destination " + std::to_string(f.destination) + " is not a node");
    need(f.origin != f.destination, name, "origin equals destination");
    need(f.rate > 0 && f.interval() > zero, name + ".rate", "must be positive and at most 1e6");
    need(f.payload_bits > 0, name + ".payload", "must be positive");
    need(!f.stop || *f.stop > f.start, name + ".stop", "must be after start");
    if (c.mac.mode == MacMode::kHmac) {
      const std::int64_t bits = f.payload_bits + FrameSizes::kDataHeader + source_route_bits;
      need(bits * 1'000'000 <= c.mac.islot_len.us() * c.mac.bitrate, name + ".payload",
           "data frame does not fit in one I-SLOT");
    }
  }
  if (c.mac.mode == MacMode::kHmac && c.mode == DiscoveryMode::kDsr) {
    need((FrameSizes::kRreq + source_route_bits) * 1'000'000 <= c.mac.islot_len.us() * c.mac.bitrate, "nodes",
         "a full-length route request does not fit in one I-SLOT");
  }
  for (std::size_t i = 0; i < c.failures.size(); ++i)
    need(valid(c.failures[i].node), "fail." + std::to_string(i), "no such node");
  for (std::size_t i = 0; i < c.static_routes.size(); ++i) {
    const auto& r = c.static_routes[i];
    const std::string name = "route." + std::to_string(i);
    need(valid(r.node) && valid(r.destination) && valid(r.next_hop), name, "names an unknown node");
    need(r.node != r.destination && r.node != r.next_hop, name, "route points at its own node");
  }
}

std::string emit_scenario(const ScenarioConfig& c) {
  std::ostringstream o;
  auto kv = [&](const std::string& k, const std::string& v) { o << k << " = " << v << '\n'; };
  kv("nodes", std::to_string(c.nodes));
  kv("arena", fmt_double(c.arena.width) + " " + fmt_double(c.arena.height));
  kv("range", fmt_double(c.range));
  kv("run", format_seconds(c.run));
  kv("seed", std::to_string(c.seed));
  kv("mode", to_string(c.mode));
  kv("mobility.fraction", fmt_double(c.mobile_fraction));
  kv("mobility.vmin", fmt_double(c.mobility.v_min));
  kv("mobility.vmax", fmt_double(c.mobility.v_max));
  kv("mobility.step", format_seconds(c.mobility_step));
  kv("mac", to_string(c.mac.mode));
  kv("mac.wslot", format_seconds(c.mac.wslot_len));
  kv("mac.islot", format_seconds(c.mac.islot_len));
  kv("mac.islots", std::to_string(c.mac.n_islots));
  kv("mac.bitrate", std::to_string(c.mac.bitrate));
  kv("mac.jitter", format_seconds(c.mac.jitter));
  kv("mac.bcast_defer", std::to_string(c.mac.broadcast_defer_frames));
  kv("hello.talk_prob", fmt_double(c.hello_talk_prob));
  kv("hello.slot", format_seconds(c.hello_slot));
  kv("disco.slot", format_seconds(c.disco_slot));
  kv("routing.reply_wait", format_seconds(c.routing.reply_wait));
  kv("routing.rreq_retries", std::to_string(c.routing.rreq_retries));
  kv("routing.route_expiry", format_seconds(c.routing.route_expiry));
  kv("routing.link_fail_threshold", std::to_string(c.routing.link_fail_threshold));
  kv("routing.ad.static", std::to_string(c.routing.ad.static_routes));
  kv("routing.ad.aomdv", std::to_string(c.routing.ad.aomdv));
  kv("routing.ad.dsr", std::to_string(c.routing.ad.dsr));
  kv("power.tx", fmt_mw(c.power.tx_uw));
  kv("power.rx", fmt_mw(c.power.rx_uw));
  kv("power.listen", fmt_mw(c.power.listen_uw));
  kv("power.sleep", fmt_mw(c.power.sleep_uw));
  for (const auto& [id, p] : c.placements)
    kv("node." + std::to_string(id), fmt_double(p.x) + " " + fmt_double(p.y) + (p.mobile ? " mobile" : ""));
  for (std::size_t i = 0; i < c.flows.size(); ++i) {
    const auto& f = c.flows[i];
    const std::string k = "flow." + std::to_string(i);
    kv(k, std::to_string(f.origin) + " " + std::to_string(f.destination));
    kv(k + ".start", format_seconds(f.start));
    kv(k + ".rate", fmt_double(f.rate));
    kv(k + ".payload", std::to_string(f.payload_bits));
    if (f.stop) kv(k + ".stop", format_seconds(*f.stop));
  }
  for (std::size_t i = 0; i < c.failures.size(); ++i)
    kv("fail." + std::to_string(i), std::to_string(c.failures[i].node) + " " + format_seconds(c.failures[i].at));
  for (std::size_t i = 0; i < c.static_routes.size(); ++i) {
    const auto& r = c.static_routes[i];
    kv("route." + std::to_string(i), std::to_string(r.node) + " " + std::to_string(r.destination) + " " +
                                         std::to_string(r.next_hop) + " " + std::to_string(r.hops));
  }
  return o.str();
}

}  // namespace wsnsim
