#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netstab/metrics_global.hpp"
#include "netstab/node_table.hpp"
#include "netstab/removal.hpp"
#include "netstab/spam.hpp"
#include "netstab/stats.hpp"
#include "netstab/text.hpp"

namespace netstab {

struct ExperimentConfig {
  Channel link_rule = Channel::email;
  std::string input = "-";  // echoed only
  Duration window = Duration{30 * 86400};
  Duration horizon = Duration{14 * 86400};
  bool symmetrize_distances = false;
  SpamThresholds thresholds;
  const LabelTable* labels = nullptr;
  std::string labels_path;  // echoed only
  std::shared_ptr<const SentimentScorer> scorer;  // null = default lexicon
  std::string lexicon = "default";
  std::uint64_t seed = 42;
  unsigned threads = 0;  // not echoed: results do not depend on it
  /// Plans whose selections coincide share one computation; an empty
  /// selection reuses the baseline. Off forces a full recomputation.
  bool reuse_identical_selections = true;

  /// 30d/14d windows for email, 7d/7d for microposts.
  static ExperimentConfig defaults_for(Channel channel);
};

struct PlanOutcome {
  std::string plan;
  std::optional<std::string> error;
  std::size_t selection_size = 0;
  std::size_t surviving = 0;
  std::optional<GlobalMetrics> global;
  std::array<CorrelationResult, kNodeMetricNames.size()> correlations{};
  NodeMetricTable node_metrics;
};

struct StabilityReport {
  ExperimentConfig config;
  std::vector<std::string> plan_labels;
  GlobalMetrics full_global;
  NodeMetricTable full_nodes;
  Classification spam;
  std::vector<PlanOutcome> plans;  // declared order, duplicates removed
  std::vector<std::string> flags;
};

/// Baseline on the full stream, then for each plan: select, remove,
/// restrict the stream, recompute every global and node metric, and
/// correlate node metrics over surviving nodes. A failing plan is recorded
/// with its error and the run continues.
StabilityReport run_experiment(std::span<const MessageEvent> events, std::span<const RemovalPlan> plans,
                               const ExperimentConfig& config);

/// Keys config, global_metrics, node_correlations, selection_sizes, flags.
/// Reals carry 6 significant digits.
void write_report_json(std::ostream& out, const StabilityReport& report);

/// plan,metric,pearson_r,spearman_rho,p_value,n_pairs in table order.
void write_report_csv(std::ostream& out, const StabilityReport& report);

/// Rounds to `digits` significant decimal digits.
double round_significant(double value, int digits = 6);

}  // namespace netstab
