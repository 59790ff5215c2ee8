#include "netstab/stability.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <json.hpp>
#include <ostream>
#include <unordered_set>

#include "netstab/ingest.hpp"
#include "netstab/version.hpp"

namespace netstab {

using Json = nlohmann::ordered_json;

ExperimentConfig ExperimentConfig::defaults_for(Channel channel) {
  ExperimentConfig config;
  config.link_rule = channel;
  if (channel == Channel::micropost) {
    config.window = Duration{7 * 86400};
    config.horizon = Duration{7 * 86400};
  }
  return config;
}

double round_significant(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value == 0.0 ? 0.0 : value;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  const double rounded = std::strtod(buf, nullptr);
  return rounded == 0.0 ? 0.0 : rounded;
}

namespace {

NodeMetricTable node_table(const CommGraph& graph, std::span<const MessageEvent> events,
                           const SentimentScorer& scorer, const ExperimentConfig& config,
                           const std::optional<TimeSpan>& span, const SweepResult& sweep) {
  NodeMetricOptions options;
  options.link_rule = config.link_rule;
  options.window = config.window;
  options.horizon = config.horizon;
  options.window_span = span;
  options.threads = config.threads;
  return compute_node_metrics(graph, events, scorer, options, &sweep);
}

// Global metrics plus the directed betweenness sweep the node table needs.
std::pair<GlobalMetrics, SweepResult> measure(const CommGraph& graph, const ExperimentConfig& config) {
  SweepResult directed = sweep_shortest_paths(graph, {.betweenness = true, .threads = config.threads});
  if (!config.symmetrize_distances) return {global_metrics(graph, directed), std::move(directed)};
  const SweepResult both = sweep_shortest_paths(graph, {.symmetrize = true, .betweenness = false, .threads = config.threads});
  return {global_metrics(graph, both), std::move(directed)};
}

Json number_or_null(const std::optional<double>& v) {
  return v ? Json(round_significant(*v)) : Json(nullptr);
}

Json global_json(const GlobalMetrics& g) {
  Json j;
  j["adarp"] = g.no_reachable_pairs ? Json(nullptr) : Json(round_significant(g.adarp));
  j["diameter"] = g.diameter;
  j["clustering_coefficient"] = round_significant(g.clustering_coefficient);
  j["average_degree"] = round_significant(g.average_degree);
  j["giant_component_fraction"] = round_significant(g.giant_component_fraction);
  j["reachable_pairs"] = g.reachable_pairs;
  return j;
}

std::string cell(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

}  // namespace

StabilityReport run_experiment(std::span<const MessageEvent> input, std::span<const RemovalPlan> plans,
                               const ExperimentConfig& config) {
  if (plans.empty()) throw InputError("no removal plans given");
  config.thresholds.validate();
  if (config.window.count() <= 0 || config.horizon.count() <= 0) {
    throw InputError("window and horizon must be positive");
  }

  StabilityReport report;
  report.config = config;
  std::shared_ptr<const SentimentScorer> scorer = config.scorer;
  if (!scorer) scorer = std::make_shared<LexiconScorer>(default_lexicon());
  report.config.scorer = scorer;

  std::vector<MessageEvent> events(input.begin(), input.end());
  sort_events(events);
  const CommGraph graph = build_graph(events, config.link_rule);
  if (graph.empty()) throw InputError("empty graph");
  const std::optional<TimeSpan> span = event_span(events);

  SweepResult full_sweep;
  std::tie(report.full_global, full_sweep) = measure(graph, config);
  report.full_nodes = node_table(graph, events, *scorer, config, span, full_sweep);
  full_sweep = {};

  report.flags.push_back(
      "closeness uses the reachability-scaled form (r/(n-1))*(r/sum d); it is the least stable node metric "
      "under removal");
  if (report.full_nodes.oscillation_series_too_short) {
    report.flags.push_back("betweenness_oscillations: fewer than 3 windows, counts are zero");
  }

  const bool wants_spam =
      std::any_of(plans.begin(), plans.end(), [](const RemovalPlan& p) { return p.needs_verdicts(); });
  if (wants_spam) {
    const CriteriaEvaluation eval = evaluate_criteria(events, graph, config.labels, config.thresholds);
    report.spam = classify(eval, config.thresholds);
    if (!report.spam.converged) {
      report.flags.push_back("spam fixed point did not converge within " +
                             std::to_string(config.thresholds.max_fixed_point_iters) + " iterations");
    }
    if (eval.unknown_labels > 0) {
      report.flags.push_back(std::to_string(eval.unknown_labels) + " labeled nodes are not in the graph");
    }
  }

  std::unordered_set<std::string> seen;
  std::map<std::vector<NodeIndex>, std::size_t> computed;  // selection -> index in report.plans
  for (const RemovalPlan& plan : plans) {
    const std::string label = plan_label(plan);
    if (!seen.insert(label).second) {
      report.flags.push_back("plan " + label + " listed more than once; evaluated once");
      continue;
    }
    report.plan_labels.push_back(label);
    PlanOutcome outcome;
    outcome.plan = label;
    try {
      const Selection sel = select_nodes(graph, plan, wants_spam ? &report.spam : nullptr);
      outcome.selection_size = sel.nodes.size();
      if (!sel.skipped.empty()) {
        report.flags.push_back("plan " + label + ": " + std::to_string(sel.skipped.size()) +
                               " listed nodes are not in the graph");
      }
      if (config.reuse_identical_selections) {
        if (const auto it = computed.find(sel.nodes); it != computed.end()) {
          const PlanOutcome& twin = report.plans[it->second];
          outcome.surviving = twin.surviving;
          outcome.global = twin.global;
          outcome.node_metrics = twin.node_metrics;
          outcome.correlations = twin.correlations;
          for (std::size_t k = 0; k < kNodeMetricNames.size(); ++k) {
            for (const std::string& flag : outcome.correlations[k].flags) {
              report.flags.push_back("plan " + label + ": " + std::string(kNodeMetricNames[k]) + ": " + flag);
            }
          }
          report.plans.push_back(std::move(outcome));
          continue;
        }
      }
      const CommGraph reduced = remove_nodes(graph, sel.nodes);
      outcome.surviving = reduced.node_count();
      if (reduced.empty()) throw InputError("every node removed");
      if (config.reuse_identical_selections && sel.nodes.empty()) {
        outcome.global = report.full_global;
        outcome.node_metrics = report.full_nodes;
      } else {
        const std::vector<MessageEvent> kept = restrict_events(events, graph, sel.nodes);
        auto [global, sweep] = measure(reduced, config);
        outcome.global = global;
        outcome.node_metrics = node_table(reduced, kept, *scorer, config, span, sweep);
      }

      std::vector<std::size_t> full_index(reduced.node_count());
      for (NodeIndex v = 0; v < reduced.node_count(); ++v) full_index[v] = *graph.find(reduced.node(v));
      std::vector<std::optional<double>> a(reduced.node_count()), b(reduced.node_count());
      for (std::size_t k = 0; k < kNodeMetricNames.size(); ++k) {
        for (NodeIndex v = 0; v < reduced.node_count(); ++v) {
          a[v] = report.full_nodes.records[full_index[v]].metric(k);
          b[v] = outcome.node_metrics.records[v].metric(k);
        }
        outcome.correlations[k] = correlate(a, b);
        for (const std::string& flag : outcome.correlations[k].flags) {
          report.flags.push_back("plan " + label + ": " + std::string(kNodeMetricNames[k]) + ": " + flag);
        }
      }
      computed.emplace(sel.nodes, report.plans.size());
    } catch (const std::exception& e) {
      outcome.error = e.what();
      outcome.global.reset();
      outcome.correlations = {};
      report.flags.push_back("plan " + label + " failed: " + e.what());
    }
    report.plans.push_back(std::move(outcome));
  }
  return report;
}

void write_report_json(std::ostream& out, const StabilityReport& report) {
  const ExperimentConfig& c = report.config;
  const SpamThresholds& t = c.thresholds;
  Json config;
  config["tool"] = "netstab";
  config["version"] = std::string(kVersion);
  config["input"] = c.input;
  config["format"] = c.link_rule == Channel::email ? "email" : "micropost";
  config["plans"] = report.plan_labels;
  config["window"] = format_duration(c.window);
  config["horizon"] = format_duration(c.horizon);
  config["symmetrize_distances"] = c.symmetrize_distances;
  config["labels"] = c.labels_path.empty() ? Json(nullptr) : Json(c.labels_path);
  config["lexicon"] = c.lexicon;
  config["scorer"] = c.scorer ? c.scorer->name() : std::string("lexicon:default");
  config["seed"] = c.seed;
  config["spam"] = {
      {"high_volume_percentile", round_significant(t.high_volume_percentile)},
      {"min_received_nonspam", t.min_received_nonspam},
      {"follow_ratio", round_significant(t.follow_ratio)},
      {"active_hour_bins", t.active_hour_bins},
      {"url_fraction", round_significant(t.url_fraction)},
      {"ci_screen", round_significant(t.ci_screen)},
      {"max_fixed_point_iters", t.max_fixed_point_iters},
  };

  Json globals;
  globals["full"] = global_json(report.full_global);
  Json correlations = Json::object();
  Json sizes = Json::object();
  for (const PlanOutcome& p : report.plans) {
    globals[p.plan] = p.global ? global_json(*p.global) : Json(nullptr);
    sizes[p.plan] = p.selection_size;
    if (p.error) {
      correlations[p.plan] = nullptr;
      continue;
    }
    Json metrics = Json::object();
    for (std::size_t k = 0; k < kNodeMetricNames.size(); ++k) {
      const CorrelationResult& r = p.correlations[k];
      metrics[std::string(kNodeMetricNames[k])] = {
          {"pearson_r", number_or_null(r.pearson_r)},
          {"spearman_rho", number_or_null(r.spearman_rho)},
          {"p_value", number_or_null(r.p_value)},
          {"n_pairs", r.n_pairs},
      };
    }
    correlations[p.plan] = std::move(metrics);
  }

  Json doc;
  doc["config"] = std::move(config);
  doc["global_metrics"] = std::move(globals);
  doc["node_correlations"] = std::move(correlations);
  doc["selection_sizes"] = std::move(sizes);
  doc["flags"] = report.flags;
  out << doc.dump(2) << '\n';
}

void write_report_csv(std::ostream& out, const StabilityReport& report) {
  out << "plan,metric,pearson_r,spearman_rho,p_value,n_pairs\n";
  for (const PlanOutcome& p : report.plans) {
    for (std::size_t k = 0; k < kNodeMetricNames.size(); ++k) {
      const CorrelationResult& r = p.correlations[k];
      out << csv::quote(p.plan) << ',' << kNodeMetricNames[k] << ',' << cell(r.pearson_r) << ','
          << cell(r.spearman_rho) << ',' << cell(r.p_value) << ',' << r.n_pairs << '\n';
    }
  }
}

}  // namespace netstab
