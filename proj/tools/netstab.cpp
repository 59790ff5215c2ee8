// netstab command-line front end.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>

#include "netstab/export.hpp"
#include "netstab/ingest.hpp"
#include "netstab/metrics_global.hpp"
#include "netstab/node_table.hpp"
#include "netstab/removal.hpp"
#include "netstab/spam.hpp"
#include "netstab/stability.hpp"
#include "netstab/synth.hpp"
#include "netstab/text.hpp"
#include "netstab/version.hpp"

namespace {

using namespace netstab;
using Json = nlohmann::ordered_json;

struct InputArgs {
  std::string path = "-";
  std::string format = "email";
  double max_reject_fraction = 0.10;
};

void add_input(CLI::App* cmd, InputArgs& args) {
  cmd->add_option("--input,-i", args.path, "Message file, '-' for standard input")->capture_default_str();
  cmd->add_option("--format,-f", args.format, "email | micropost")->capture_default_str();
  cmd->add_option("--max-reject-fraction", args.max_reject_fraction, "Abort when more rows are rejected")
      ->capture_default_str();
}

InputFormat format_of(const InputArgs& args) { return parse_input_format(args.format); }

IngestResult read_input(const InputArgs& args) {
  IngestOptions options;
  options.max_reject_fraction = args.max_reject_fraction;
  const InputFormat format = format_of(args);
  IngestResult result = args.path == "-" ? ingest(std::cin, format, options) : ingest(args.path, format, options);
  for (const Reject& r : result.rejects) {
    std::cerr << "netstab: " << args.path << ": line " << r.line << ": " << r.reason << '\n';
  }
  return result;
}

// Standard output for "-", otherwise a file created on first use.
class Output {
public:
  explicit Output(const std::string& path) : path_(path) {
    if (path_ == "-") return;
    file_ = std::make_unique<std::ofstream>(path_, std::ios::binary);
    if (!*file_) throw InputError("cannot write output file '" + path_ + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close() {
    stream().flush();
    if (!stream()) throw std::runtime_error("write failed for '" + path_ + "'");
  }

private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

std::shared_ptr<const SentimentScorer> make_scorer(const std::string& lexicon) {
  if (lexicon.empty() || lexicon == "default") return std::make_shared<LexiconScorer>(default_lexicon());
  return std::make_shared<LexiconScorer>(load_lexicon(lexicon), "lexicon:" + lexicon);
}

void add_thresholds(CLI::App* cmd, SpamThresholds& t) {
  cmd->add_option("--high-volume-percentile", t.high_volume_percentile, "Criterion A percentile, 100 disables")
      ->capture_default_str();
  cmd->add_option("--min-received-nonspam", t.min_received_nonspam, "Criterion B inbound ceiling")
      ->capture_default_str();
  cmd->add_option("--follow-ratio", t.follow_ratio, "Criterion D following/followers ratio")->capture_default_str();
  cmd->add_option("--active-hour-bins", t.active_hour_bins, "Micropost criterion A hour bins")
      ->capture_default_str();
  cmd->add_option("--url-fraction", t.url_fraction, "Micropost criterion C link share")->capture_default_str();
  cmd->add_option("--ci-screen", t.ci_screen, "Contribution-index screen threshold")->capture_default_str();
  cmd->add_option("--max-iters", t.max_fixed_point_iters, "Fixed-point iteration cap")->capture_default_str();
}

Json json_opt(const std::optional<double>& v) { return v ? Json(round_significant(*v)) : Json(nullptr); }

Json global_json(const GlobalMetrics& g) {
  return {{"adarp", g.no_reachable_pairs ? Json(nullptr) : Json(round_significant(g.adarp))},
          {"diameter", g.diameter},
          {"clustering_coefficient", round_significant(g.clustering_coefficient)},
          {"average_degree", round_significant(g.average_degree)},
          {"giant_component_fraction", round_significant(g.giant_component_fraction)},
          {"reachable_pairs", g.reachable_pairs}};
}

Json matrix_json(const CorrelationMatrix& m) {
  Json out;
  out["rows"] = m.n;
  out["variables"] = Json::array();
  for (const char* v : kSemanticVariables) out["variables"].push_back(v);
  Json r = Json::array(), p = Json::array(), pairs = Json::array();
  for (std::size_t i = 0; i < kSemanticVariables.size(); ++i) {
    Json rr = Json::array(), pp = Json::array(), nn = Json::array();
    for (std::size_t j = 0; j < kSemanticVariables.size(); ++j) {
      rr.push_back(json_opt(m.r[i][j]));
      pp.push_back(json_opt(m.p_value[i][j]));
      nn.push_back(m.n_pairs[i][j]);
    }
    r.push_back(std::move(rr));
    p.push_back(std::move(pp));
    pairs.push_back(std::move(nn));
  }
  out["r"] = std::move(r);
  out["p_value"] = std::move(p);
  out["n_pairs"] = std::move(pairs);
  out["flags"] = m.flags;
  return out;
}

Duration duration_or(const std::string& text, Duration fallback) {
  return text.empty() ? fallback : parse_duration(text);
}

std::string plan_file_name(const std::string& label) {
  std::string out;
  for (const char c : label) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Network stability under node removal"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "INI file; [section] names match subcommands");
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 0;
  app.add_option("--threads,-j", threads, "Worker threads, 0 = all cores (results do not depend on it)");

  // ingest-check
  InputArgs check_in;
  std::string check_out = "-";
  auto* check = app.add_subcommand("ingest-check", "Validate a message file and summarize it");
  add_input(check, check_in);
  check->add_option("--out,-o", check_out, "Summary JSON")->capture_default_str();

  // metrics
  InputArgs met_in;
  std::string met_out = "-", met_nodes, met_window, met_horizon, met_lexicon = "default";
  bool met_sym = false;
  auto* metrics = app.add_subcommand("metrics", "Global metrics and per-node metrics of one stream");
  add_input(metrics, met_in);
  metrics->add_option("--out,-o", met_out, "Global metrics JSON")->capture_default_str();
  metrics->add_option("--node-out", met_nodes, "Per-node metrics CSV");
  metrics->add_option("--window", met_window, "Snapshot window (default 30d email, 7d micropost)");
  metrics->add_option("--horizon", met_horizon, "Response horizon (default 14d email, 7d micropost)");
  metrics->add_option("--lexicon", met_lexicon, "Sentiment lexicon file or 'default'")->capture_default_str();
  metrics->add_flag("--symmetrize-distances", met_sym, "Undirected distances for ADARP and diameter");

  // detect-spam
  InputArgs spam_in;
  std::string spam_out = "-", spam_labels, spam_screen;
  SpamThresholds spam_t;
  auto* spam = app.add_subcommand("detect-spam", "Classify accounts with the spam criteria");
  add_input(spam, spam_in);
  spam->add_option("--labels", spam_labels, "node_id,label CSV (spam|ham)");
  spam->add_option("--out,-o", spam_out, "Verdicts CSV")->capture_default_str();
  spam->add_option("--ci-screen-out", spam_screen, "Accounts passing the contribution-index screen");
  add_thresholds(spam, spam_t);

  // simplify
  InputArgs simp_in;
  std::string simp_out = "-", simp_plan, simp_labels;
  SpamThresholds simp_t;
  auto* simplify = app.add_subcommand("simplify", "Remove a node selection and write the reduced stream");
  add_input(simplify, simp_in);
  simplify->add_option("--plan", simp_plan, "Removal plan")->required();
  simplify->add_option("--labels", simp_labels, "node_id,label CSV for spammer plans");
  simplify->add_option("--out,-o", simp_out, "Reduced message stream")->capture_default_str();
  add_thresholds(simplify, simp_t);

  // stability
  InputArgs stab_in;
  std::string stab_out = "-", stab_csv, stab_nodes_dir, stab_plans = "spammers,bottom,top1,top5,top10,top1+bottom,spammers+bottom";
  std::string stab_window, stab_horizon, stab_labels, stab_lexicon = "default";
  std::uint64_t stab_seed = 42;
  bool stab_sym = false;
  SpamThresholds stab_t;
  auto* stability = app.add_subcommand("stability", "Run every removal plan and correlate metrics");
  add_input(stability, stab_in);
  stability->add_option("--plans", stab_plans, "Comma-separated removal plans")->capture_default_str();
  stability->add_option("--window", stab_window, "Snapshot window (default 30d email, 7d micropost)");
  stability->add_option("--horizon", stab_horizon, "Response horizon (default 14d email, 7d micropost)");
  stability->add_option("--seed", stab_seed, "Recorded in the report")->capture_default_str();
  stability->add_option("--labels", stab_labels, "node_id,label CSV (spam|ham)");
  stability->add_option("--lexicon", stab_lexicon, "Sentiment lexicon file or 'default'")->capture_default_str();
  stability->add_flag("--symmetrize-distances", stab_sym, "Undirected distances for ADARP and diameter");
  stability->add_option("--out,-o", stab_out, "Report JSON")->capture_default_str();
  stability->add_option("--csv-out", stab_csv, "Report CSV, one row per plan and metric");
  stability->add_option("--node-metrics-dir", stab_nodes_dir, "Directory for node_metrics_<plan>.csv files");
  add_thresholds(stability, stab_t);

  // text
  InputArgs text_in;
  std::string text_out = "-", text_lexicon = "default";
  std::size_t text_min = 3;
  auto* text = app.add_subcommand("text", "Subject versus body semantics at message and author level");
  add_input(text, text_in);
  text->add_option("--lexicon", text_lexicon, "Sentiment lexicon file or 'default'")->capture_default_str();
  text->add_option("--min-author-messages", text_min, "Author-level inclusion floor")->capture_default_str();
  text->add_option("--out,-o", text_out, "Correlation matrices JSON")->capture_default_str();

  // synth
  SynthConfig sc;
  std::string syn_format = "email", syn_messages = "-", syn_truth, syn_latency = "2h", syn_duration = "90d";
  auto* synth = app.add_subcommand("synth", "Generate a scale-free message stream with planted spammers");
  synth->add_option("--n", sc.n, "Node count")->capture_default_str();
  synth->add_option("--m-attach", sc.m_attach, "Out-arcs per new node")->capture_default_str();
  synth->add_option("--reciprocation", sc.reciprocation_prob, "Arc reciprocation probability")->capture_default_str();
  synth->add_option("--spammers", sc.spammer_count, "Planted spammers")->capture_default_str();
  synth->add_option("--spam-multiplier", sc.spammer_volume_multiplier, "Spam volume over median activity")
      ->capture_default_str();
  synth->add_option("--reply-prob", sc.reply_prob, "Reply probability")->capture_default_str();
  synth->add_option("--reply-latency", syn_latency, "Mean reply latency")->capture_default_str();
  synth->add_option("--nudge-prob", sc.nudge_prob, "Probability of each extra ping")->capture_default_str();
  synth->add_option("--max-nudges", sc.max_nudges, "Extra pings per conversation")->capture_default_str();
  synth->add_option("--threads-per-arc", sc.threads_per_arc, "Mean conversations per arc")->capture_default_str();
  synth->add_option("--duration", syn_duration, "Time span of the stream")->capture_default_str();
  synth->add_option("--vocabulary", sc.vocabulary_size, "Vocabulary size")->capture_default_str();
  synth->add_option("--seed", sc.seed, "Random seed")->capture_default_str();
  synth->add_option("--format,-f", syn_format, "email | micropost")->capture_default_str();
  synth->add_option("--out-messages,-o", syn_messages, "Message stream")->capture_default_str();
  synth->add_option("--out-truth", syn_truth, "Planted labels CSV");

  // export
  InputArgs exp_in;
  std::string exp_out = "-", exp_as = "graphml", exp_plan, exp_labels;
  SpamThresholds exp_t;
  auto* exporter = app.add_subcommand("export", "Write the full or a reduced graph");
  add_input(exporter, exp_in);
  exporter->add_option("--as", exp_as, "graphml | edgelist")->capture_default_str();
  exporter->add_option("--plan", exp_plan, "Removal plan applied before export");
  exporter->add_option("--labels", exp_labels, "node_id,label CSV for spammer plans");
  exporter->add_option("--out,-o", exp_out, "Graph file")->capture_default_str();
  add_thresholds(exporter, exp_t);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "netstab: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  auto load_optional_labels = [](const std::string& path) -> std::optional<LabelTable> {
    if (path.empty()) return std::nullopt;
    return load_labels(path);
  };
  // Reduced graph and stream for a plan, shared by simplify and export.
  auto apply_plan = [&](const std::vector<MessageEvent>& events, const CommGraph& graph, const std::string& text,
                        const std::string& labels_path, const SpamThresholds& t) {
    const RemovalPlan plan = parse_plan(text);
    std::optional<LabelTable> labels = load_optional_labels(labels_path);
    std::optional<Classification> verdicts;
    if (plan.needs_verdicts()) verdicts = detect_spammers(events, graph, labels ? &*labels : nullptr, t);
    const Selection sel = select_nodes(graph, plan, verdicts ? &*verdicts : nullptr);
    std::cerr << "netstab: plan " << plan_label(plan) << " selects " << sel.nodes.size() << " of "
              << graph.node_count() << " nodes\n";
    return std::pair{remove_nodes(graph, sel.nodes), restrict_events(events, graph, sel.nodes)};
  };

  if (check->parsed()) {
    const IngestResult result = read_input(check_in);
    const CommGraph graph = build_graph(result.events, channel_of(format_of(check_in)));
    Json out;
    out["input"] = check_in.path;
    out["format"] = check_in.format;
    out["rows"] = result.rows;
    out["events"] = result.events.size();
    out["rejects"] = Json::array();
    for (const Reject& r : result.rejects) out["rejects"].push_back({{"line", r.line}, {"reason", r.reason}});
    out["nodes"] = graph.node_count();
    out["arcs"] = graph.arc_count();
    out["dangling_references"] = graph.build_stats().dangling_references;
    out["dropped_self_loops"] = graph.build_stats().dropped_self_loops;
    if (const auto span = event_span(result.events)) {
      out["first"] = format_timestamp(span->begin);
      out["last"] = format_timestamp(span->end);
    }
    Output sink(check_out);
    sink.stream() << out.dump(2) << '\n';
    sink.close();
  } else if (metrics->parsed()) {
    const IngestResult input = read_input(met_in);
    const Channel channel = channel_of(format_of(met_in));
    const ExperimentConfig defaults = ExperimentConfig::defaults_for(channel);
    const CommGraph graph = build_graph(input.events, channel);
    if (graph.empty()) throw InputError("empty graph");
    const GlobalMetrics global = global_metrics(graph, {.symmetrize_distances = met_sym, .threads = threads});
    const DegreeSummary deg = degree_summary(graph);
    Json out;
    out["config"] = {{"tool", "netstab"},
                     {"version", std::string(kVersion)},
                     {"input", met_in.path},
                     {"format", met_in.format},
                     {"symmetrize_distances", met_sym}};
    out["nodes"] = graph.node_count();
    out["arcs"] = graph.arc_count();
    out["global_metrics"] = global_json(global);
    out["degree"] = {{"min", deg.min}, {"median", round_significant(deg.median)}, {"max", deg.max}};
    if (!met_nodes.empty()) {
      const auto scorer = make_scorer(met_lexicon);
      NodeMetricOptions options{.link_rule = channel,
                                .window = duration_or(met_window, defaults.window),
                                .horizon = duration_or(met_horizon, defaults.horizon),
                                .threads = threads};
      out["config"]["window"] = format_duration(options.window);
      out["config"]["horizon"] = format_duration(options.horizon);
      out["config"]["scorer"] = scorer->name();
      const NodeMetricTable table = compute_node_metrics(graph, input.events, *scorer, options);
      Output nodes(met_nodes);
      write_node_metrics_csv(nodes.stream(), table);
      nodes.close();
    }
    Output sink(met_out);
    sink.stream() << out.dump(2) << '\n';
    sink.close();
  } else if (spam->parsed()) {
    const IngestResult input = read_input(spam_in);
    const CommGraph graph = build_graph(input.events, channel_of(format_of(spam_in)));
    const std::optional<LabelTable> labels = load_optional_labels(spam_labels);
    const Classification result = detect_spammers(input.events, graph, labels ? &*labels : nullptr, spam_t);
    const auto spammers = std::count_if(result.verdicts.begin(), result.verdicts.end(),
                                        [](const SpamVerdict& v) { return v.is_spammer; });
    std::cerr << "netstab: " << spammers << " spammers among " << graph.node_count() << " nodes after "
              << result.iterations << " iterations" << (result.converged ? "" : " (not converged)") << '\n';
    Output sink(spam_out);
    write_verdicts_csv(sink.stream(), result);
    sink.close();
    if (!spam_screen.empty()) {
      Output screen(spam_screen);
      screen.stream() << "node_id\n";
      for (const NodeId& id : ci_screen(input.events, graph, spam_t)) screen.stream() << csv::quote(id.str()) << '\n';
      screen.close();
    }
  } else if (simplify->parsed()) {
    const IngestResult input = read_input(simp_in);
    const CommGraph graph = build_graph(input.events, channel_of(format_of(simp_in)));
    const auto [reduced, kept] = apply_plan(input.events, graph, simp_plan, simp_labels, simp_t);
    Output sink(simp_out);
    write_events(sink.stream(), kept, format_of(simp_in));
    sink.close();
  } else if (stability->parsed()) {
    const IngestResult input = read_input(stab_in);
    const Channel channel = channel_of(format_of(stab_in));
    ExperimentConfig config = ExperimentConfig::defaults_for(channel);
    config.input = stab_in.path;
    config.window = duration_or(stab_window, config.window);
    config.horizon = duration_or(stab_horizon, config.horizon);
    config.symmetrize_distances = stab_sym;
    config.thresholds = stab_t;
    const std::optional<LabelTable> labels = load_optional_labels(stab_labels);
    config.labels = labels ? &*labels : nullptr;
    config.labels_path = stab_labels;
    config.scorer = make_scorer(stab_lexicon);
    config.lexicon = stab_lexicon;
    config.seed = stab_seed;
    config.threads = threads;
    const std::vector<RemovalPlan> plans = parse_plan_list(stab_plans);
    const StabilityReport report = run_experiment(input.events, plans, config);
    Output sink(stab_out);
    write_report_json(sink.stream(), report);
    sink.close();
    if (!stab_csv.empty()) {
      Output csv_sink(stab_csv);
      write_report_csv(csv_sink.stream(), report);
      csv_sink.close();
    }
    if (!stab_nodes_dir.empty()) {
      std::filesystem::create_directories(stab_nodes_dir);
      const std::filesystem::path dir(stab_nodes_dir);
      Output full((dir / "node_metrics_full.csv").string());
      write_node_metrics_csv(full.stream(), report.full_nodes);
      full.close();
      for (const PlanOutcome& p : report.plans) {
        if (p.error) continue;
        Output plan_sink((dir / ("node_metrics_" + plan_file_name(p.plan) + ".csv")).string());
        write_node_metrics_csv(plan_sink.stream(), p.node_metrics);
        plan_sink.close();
      }
    }
  } else if (text->parsed()) {
    const IngestResult input = read_input(text_in);
    const auto scorer = make_scorer(text_lexicon);
    const CorpusModel model = build_corpus_model(input.events);
    const SemanticReport report = subject_body_correlation(input.events, *scorer, model, text_min);
    Json out;
    out["config"] = {{"tool", "netstab"},
                     {"version", std::string(kVersion)},
                     {"input", text_in.path},
                     {"format", text_in.format},
                     {"scorer", report.scorer},
                     {"min_author_messages", report.min_author_messages}};
    out["email_level"] = matrix_json(report.email_level);
    out["author_level"] = matrix_json(report.author_level);
    Output sink(text_out);
    sink.stream() << out.dump(2) << '\n';
    sink.close();
  } else if (synth->parsed()) {
    const InputFormat format = parse_input_format(syn_format);
    sc.channel = channel_of(format);
    sc.reply_latency_mean = parse_duration(syn_latency);
    sc.duration = parse_duration(syn_duration);
    const CommGraph graph = gen_scale_free(sc);
    const SynthStream stream = gen_message_stream(graph, sc);
    Output sink(syn_messages);
    write_events(sink.stream(), stream.events, format);
    sink.close();
    if (!syn_truth.empty()) {
      Output truth(syn_truth);
      write_truth_csv(truth.stream(), graph, stream.truth);
      truth.close();
    }
  } else if (exporter->parsed()) {
    if (exp_as != "graphml" && exp_as != "edgelist") throw InputError("--as must be graphml or edgelist");
    const IngestResult input = read_input(exp_in);
    CommGraph graph = build_graph(input.events, channel_of(format_of(exp_in)));
    if (!exp_plan.empty()) graph = apply_plan(input.events, graph, exp_plan, exp_labels, exp_t).first;
    Output sink(exp_out);
    if (exp_as == "graphml") {
      write_graphml(sink.stream(), graph);
    } else {
      write_edge_list(sink.stream(), graph);
    }
    sink.close();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  try {
    return run(argc, argv);
  } catch (const netstab::InputError& e) {
    std::cerr << "netstab: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "netstab: internal error: " << e.what() << '\n';
    return 2;
  }
}
