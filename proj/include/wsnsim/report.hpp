#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsnsim/metrics.hpp"

namespace wsnsim {

/// File could not be written; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MetricAggregate {
  std::string name;
  std::size_t count = 0;  // runs where the metric was defined
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for fewer than 2 values
};

std::vector<MetricAggregate> aggregate(const std::vector<MetricsReport>& reports);

std::string report_json(const MetricsReport& r, const std::string& label, std::uint64_t seed);
std::string aggregate_json(const std::vector<MetricAggregate>& agg, std::size_t runs);
/// Header row, one row per node, then one summary row.
std::string report_csv(const MetricsReport& r);
std::string aggregate_csv(const std::vector<MetricAggregate>& agg);
std::string trace_text(const RunTrace& t);

/// Side-by-side table of the scalar metrics, one column per labelled run.
std::string comparison_table(const std::vector<std::pair<std::string, MetricsReport>>& runs);

void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace wsnsim
