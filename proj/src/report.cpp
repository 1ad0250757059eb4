#include "wsnsim/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace wsnsim {

namespace {

nlohmann::ordered_json opt(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : ""; }

const char* kStateNames[kRadioStateCount] = {"tx", "rx", "listen", "sleep"};

}  // namespace

std::vector<MetricAggregate> aggregate(const std::vector<MetricsReport>& reports) {
  std::vector<MetricAggregate> out;
  if (reports.empty()) return out;
  const auto names = scalar_metrics(reports.front());
  for (std::size_t k = 0; k < names.size(); ++k) {
    std::vector<double> vals;
    for (const auto& r : reports)
      if (auto v = scalar_metrics(r)[k].second) vals.push_back(*v);
    MetricAggregate a;
    a.name = names[k].first;
    a.count = vals.size();
    if (!vals.empty()) {
      double sum = 0;
      for (double v : vals) sum += v;
      a.mean = sum / static_cast<double>(vals.size());
      if (vals.size() > 1) {
        double ss = 0;
        for (double v : vals) ss += (v - a.mean) * (v - a.mean);
        a.stddev = std::sqrt(ss / static_cast<double>(vals.size() - 1));
      }
    }
    out.push_back(a);
  }
  return out;
}

std::string report_json(const MetricsReport& r, const std::string& label, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["scenario"] = label;
  j["seed"] = seed;
  j["run_seconds"] = r.run_seconds;
  nlohmann::ordered_json s;
  for (const auto& [name, v] : scalar_metrics(r)) s[name] = opt(v);
  j["summary"] = s;
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const auto& n : r.per_node) {
    nlohmann::ordered_json e;
    e["node"] = n.node;
    for (std::size_t k = 0; k < kRadioStateCount; ++k) {
      e[std::string(kStateNames[k]) + "_s"] = n.seconds[k];
      e[std::string(kStateNames[k]) + "_j"] = n.joules[k];
    }
    e["total_j"] = n.total_joules;
    e["awake_fraction"] = n.awake_fraction;
    e["neighbors_discovered"] = n.neighbors_discovered;
    nodes.push_back(e);
  }
  j["nodes"] = nodes;
  return j.dump(2) + "\n";
}

std::string aggregate_json(const std::vector<MetricAggregate>& agg, std::size_t runs) {
  nlohmann::ordered_json j;
  j["runs"] = runs;
  nlohmann::ordered_json m;
  for (const auto& a : agg) m[a.name] = {{"count", a.count}, {"mean", a.mean}, {"stddev", a.stddev}};
  j["metrics"] = m;
  return j.dump(2) + "\n";
}

std::string report_csv(const MetricsReport& r) {
  std::ostringstream o;
  const auto metrics = scalar_metrics(r);
  o << "row,node";
  for (const char* s : kStateNames) o << ',' << s << "_s";
  for (const char* s : kStateNames) o << ',' << s << "_j";
  o << ",total_j,awake_fraction,neighbors_discovered";
  for (const auto& [name, v] : metrics) o << ',' << name;
  o << '\n';
  for (const auto& n : r.per_node) {
    o << "node," << n.node;
    for (double v : n.seconds) o << ',' << num(v);
    for (double v : n.joules) o << ',' << num(v);
    o << ',' << num(n.total_joules) << ',' << num(n.awake_fraction) << ',' << n.neighbors_discovered;
    for (std::size_t k = 0; k < metrics.size(); ++k) o << ',';
    o << '\n';
  }
  o << "summary,";
  for (std::size_t k = 0; k < 2 * kRadioStateCount; ++k) o << ',';
  o << ',' << num(r.total_joules) << ",,";
  for (const auto& [name, v] : metrics) o << ',' << num(v);
  o << '\n';
  return o.str();
}

std::string aggregate_csv(const std::vector<MetricAggregate>& agg) {
  std::ostringstream o;
  o << "metric,count,mean,stddev\n";
  for (const auto& a : agg) o << a.name << ',' << a.count << ',' << num(a.mean) << ',' << num(a.stddev) << '\n';
  return o.str();
}

std::string trace_text(const RunTrace& t) {
  std::string out;
  for (const auto& l : t.lines) {
    out += l.text;
    out += '\n';
  }
  return out;
}

std::string comparison_table(const std::vector<std::pair<std::string, MetricsReport>>& runs) {
  std::ostringstream o;
  constexpr int kName = 26;
  constexpr int kCol = 18;
  o << std::left << std::setw(kName) << "metric";
  for (const auto& [label, r] : runs) o << std::right << std::setw(kCol) << label;
  o << '\n';
  if (runs.empty()) return o.str();
  const auto rows = scalar_metrics(runs.front().second);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    o << std::left << std::setw(kName) << rows[k].first;
    for (const auto& [label, r] : runs) {
      const auto v = scalar_metrics(r)[k].second;
      o << std::right << std::setw(kCol) << (v ? num(*v) : "-");
    }
    o << '\n';
  }
  return o.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << content;
  f.close();
  if (!f) throw IoError("failed writing " + path.string());
}

}  // namespace wsnsim
