// Acceptance checks. Prints one PASS/FAIL line per criterion; exits
// nonzero when any selected criterion fails. Arguments pick criteria
// (default: all nine).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include <unistd.h>

#include "oracles.hpp"
#include "support.hpp"
#include "netstab/metrics_global.hpp"
#include "netstab/metrics_node.hpp"
#include "netstab/removal.hpp"
#include "netstab/spam.hpp"
#include "netstab/stability.hpp"
#include "netstab/synth.hpp"
#include "netstab/text.hpp"

#ifndef NETSTAB_CLI_PATH
#error "NETSTAB_CLI_PATH must name the netstab executable"
#endif

using namespace netstab;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (failures.size() < 8) failures.push_back(what);
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

constexpr std::size_t kActivity = 4, kBetweenness = 6, kCloseness = 8, kDegree = 9;
constexpr std::array<std::uint64_t, 5> kSeeds = {1, 2, 3, 4, 5};

const PlanOutcome* find_plan(const StabilityReport& r, const std::string& name) {
  for (const auto& p : r.plans) {
    if (p.plan == name) return &p;
  }
  return nullptr;
}

SynthConfig default_synth(std::uint64_t seed) {
  SynthConfig c;
  c.n = 2000;
  c.m_attach = 3;
  c.spammer_count = 10;
  c.seed = seed;
  return c;
}

// ---------------------------------------------------------------- C1
Outcome criterion_1() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 pick(101);

  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t n = 2 + pick() % 7;
    const double p = 0.15 + 0.1 * static_cast<double>(pick() % 6);
    const CommGraph g = oracle::random_digraph(n, p, 1000 + s);
    const auto expected = oracle::brute_force_betweenness(g);
    const auto got = betweenness_centrality(g, 1);
    for (std::size_t v = 0; v < n; ++v) {
      const double want = boost::rational_cast<double>(expected[v]);
      o.require(oracle::close_rel(got[v], want, 1e-12),
                "betweenness graph " + std::to_string(s) + " node " + std::to_string(v) + ": " + fmt(got[v], 17) +
                    " vs " + fmt(want, 17));
    }
  }

  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t n = 1 + pick() % 64;
    const double p = std::min(1.0, (0.5 + static_cast<double>(pick() % 40) / 10.0) / static_cast<double>(n));
    const CommGraph g = oracle::random_digraph(n, p, 2000 + s);
    const auto d = oracle::floyd_warshall(g);
    const auto stats = oracle::distance_stats(d);
    const std::string tag = "distance graph " + std::to_string(s);
    o.require(diameter(g) == stats.diameter, tag + " diameter");
    o.require(oracle::close_rel(adarp(g), stats.adarp(), 1e-9), tag + " adarp");
    const auto want = oracle::closeness(d);
    const auto got = closeness_centrality(g, 1);
    for (std::size_t v = 0; v < n; ++v) {
      o.require(oracle::close_rel(got[v], want[v], 1e-9), tag + " closeness node " + std::to_string(v));
    }
    const auto sym = oracle::distance_stats(oracle::floyd_warshall_symmetric(g));
    GlobalOptions opt;
    opt.symmetrize_distances = true;
    o.require(diameter(g, opt) == sym.diameter, tag + " symmetrized diameter");
    o.require(oracle::close_rel(adarp(g, opt), sym.adarp(), 1e-9), tag + " symmetrized adarp");
  }

  for (std::uint64_t s = 0; s < 50; ++s) {
    const std::size_t n = 3 + pick() % 62;
    const double p = 0.02 + 0.03 * static_cast<double>(pick() % 10);
    const CommGraph g = oracle::random_digraph(n, p, 3000 + s);
    o.require(oracle::close_rel(clustering_coefficient(g), oracle::triple_clustering(g), 1e-12),
              "clustering graph " + std::to_string(s));
  }

  const double elapsed = seconds_since(t0);
  o.require(elapsed < 60.0, "runtime " + fmt(elapsed) + " s");
  o.detail = "250 random graphs, " + fmt(elapsed, 3) + " s";
  return o;
}

// ---------------------------------------------------------------- C2
Outcome criterion_2() {
  Outcome o;
  o.require(contribution_index(9, 1) == 0.8, "CI(9,1)");
  for (std::uint64_t k = 1; k <= 50; ++k) o.require(contribution_index(k, k) == 0.0, "CI(k,k)");
  o.require(contribution_index(0, 5) == -1.0, "CI(0,5)");
  o.require(!contribution_index(0, 0), "CI(0,0) defined");

  const CommGraph path = support::graph_of({"a", "b", "c"}, {{0, 1}, {1, 2}});
  o.require(adarp(path) == 4.0 / 3.0, "path adarp");
  o.require(diameter(path) == 2, "path diameter");
  const auto b = betweenness_centrality(path, 1);
  o.require(b[0] == 0.0 && b[1] == 1.0 && b[2] == 0.0, "path betweenness");

  const CommGraph triangle = support::graph_of({"a", "b", "c"}, {{0, 1}, {1, 2}, {2, 0}});
  o.require(clustering_coefficient(triangle) == 1.0, "triangle clustering");
  const CommGraph star = support::graph_of({"h", "l1", "l2", "l3", "l4"}, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  o.require(clustering_coefficient(star) == 0.0, "star clustering");
  o.detail = "contribution index, path, triangle, star";
  return o;
}

// ---------------------------------------------------------------- C3
void check_identity(Outcome& o, const StabilityReport& r, const std::string& tag) {
  for (const PlanOutcome& p : r.plans) {
    const std::string t = tag + "/" + p.plan;
    o.require(!p.error, t + " failed");
    o.require(p.selection_size == 0, t + " selection not empty");
    o.require(p.global && *p.global == r.full_global, t + " global metrics differ");
    for (std::size_t m = 0; m < kNodeMetricNames.size(); ++m) {
      const auto& c = p.correlations[m];
      if (c.n_pairs < 3) continue;
      // A metric that is constant on the full graph has no r to compare.
      if (!c.pearson_r) {
        o.require(!c.flags.empty() && c.flags[0] == "degenerate variance",
                  t + " " + std::string(kNodeMetricNames[m]) + " missing r");
        continue;
      }
      o.require(std::fabs(*c.pearson_r - 1.0) <= 1e-12, t + " " + std::string(kNodeMetricNames[m]) + " r=" +
                                                             fmt(*c.pearson_r, 17));
    }
  }
}

Outcome criterion_3() {
  Outcome o;
  std::size_t metrics_checked = 0;
  for (const std::uint64_t seed : {11u, 12u, 13u}) {
    SynthConfig c;
    c.n = 400;
    c.seed = seed;
    const auto stream = synthesize(c);
    RemovalPlan empty;
    empty.kind = RemovalPlan::Kind::custom;
    empty.source = "none";
    const std::vector<RemovalPlan> plans{empty};
    ExperimentConfig cfg;
    cfg.reuse_identical_selections = false;
    const StabilityReport r = run_experiment(stream.events, plans, cfg);
    check_identity(o, r, "seed " + std::to_string(seed));
    for (const auto& cr : r.plans[0].correlations) metrics_checked += cr.pearson_r ? 1 : 0;
  }

  // A bidirectional ring has no bottom nodes, so the bottom plan selects nothing.
  std::vector<MessageEvent> ev;
  for (int i = 0; i < 12; ++i) {
    const std::string a = "n" + std::to_string(i), b = "n" + std::to_string((i + 1) % 12);
    auto m = support::email("p" + std::to_string(i), i * 5400, a, {b});
    m.subject_text = "update " + std::to_string(i);
    m.body_text = i % 3 ? "great progress thanks" : "sorry a problem came up";
    ev.push_back(m);
    auto reply = support::email("r" + std::to_string(i), i * 5400 + 300 * (i + 2), b, {a});
    reply.body_text = "noted " + std::to_string(i * i);
    ev.push_back(reply);
  }
  sort_events(ev);
  ExperimentConfig cfg;
  cfg.window = Duration{4 * 3600};
  cfg.reuse_identical_selections = false;
  const std::vector<RemovalPlan> plans{parse_plan("bottom")};
  check_identity(o, run_experiment(ev, plans, cfg), "ring");
  o.detail = std::to_string(metrics_checked) + " metric correlations on synthetic streams plus a ring";
  return o;
}

// ---------------------------------------------------------------- C4
Outcome criterion_4() {
  Outcome o;
  const auto plans = parse_plan_list("spammers,bottom,top1,top5,top10,top1+bottom,spammers+bottom");
  int closeness_lower = 0, gcf_more = 0, diameter_le = 0;
  double worst_r = 1.0, slowest = 0;
  for (const std::uint64_t seed : kSeeds) {
    const auto t0 = Clock::now();
    const auto stream = synthesize(default_synth(seed));
    const StabilityReport r = run_experiment(stream.events, plans, ExperimentConfig{});
    slowest = std::max(slowest, seconds_since(t0));
    const std::string tag = "seed " + std::to_string(seed);
    const PlanOutcome* sp = find_plan(r, "spammers");
    const PlanOutcome* spb = find_plan(r, "spammers+bottom");
    const PlanOutcome* top = find_plan(r, "top10");
    const PlanOutcome* bottom = find_plan(r, "bottom");
    if (!sp || !spb || !top || !bottom || sp->error || spb->error || top->error || bottom->error) {
      o.require(false, tag + " plan missing or failed");
      continue;
    }
    for (const PlanOutcome* p : {sp, spb}) {
      for (const std::size_t m : {kDegree, kBetweenness, kActivity}) {
        const auto& rv = p->correlations[m].pearson_r;
        o.require(rv && *rv >= 0.9, tag + " " + p->plan + " " + std::string(kNodeMetricNames[m]) + " r=" +
                                        (rv ? fmt(*rv) : "undefined"));
        if (rv) worst_r = std::min(worst_r, *rv);
      }
    }
    const auto& top_c = top->correlations[kCloseness].pearson_r;
    const auto& spb_c = spb->correlations[kCloseness].pearson_r;
    if (top_c && spb_c && *top_c < *spb_c) ++closeness_lower;
    const double full_gcf = r.full_global.giant_component_fraction;
    if (full_gcf - top->global->giant_component_fraction > full_gcf - bottom->global->giant_component_fraction) {
      ++gcf_more;
    }
    const int d_full = r.full_global.diameter;
    if (std::abs(sp->global->diameter - d_full) <= std::abs(top->global->diameter - d_full)) ++diameter_le;
  }
  o.require(closeness_lower >= 4, "(b) closeness lower under top10 in " + std::to_string(closeness_lower) + "/5");
  o.require(gcf_more == 5, "(c) giant component drop larger under top10 in " + std::to_string(gcf_more) + "/5");
  o.require(diameter_le >= 4, "(d) diameter change no larger under spammers in " + std::to_string(diameter_le) + "/5");
  o.require(slowest < 300.0, "runtime " + fmt(slowest) + " s for one seed");
  o.detail = "min r " + fmt(worst_r) + "; (b) " + std::to_string(closeness_lower) + "/5; (c) " +
             std::to_string(gcf_more) + "/5; (d) " + std::to_string(diameter_le) + "/5; slowest seed " +
             fmt(slowest, 3) + " s";
  return o;
}

// ---------------------------------------------------------------- C5
Outcome criterion_5() {
  Outcome o;
  double min_precision = 1, min_recall = 1, min_screen = 1, min_ci_share = 1;
  for (const std::uint64_t seed : kSeeds) {
    const auto stream = synthesize(default_synth(seed));
    const CommGraph g = build_graph(stream.events, Channel::email);
    const SpamThresholds t;
    const Classification c = detect_spammers(stream.events, g, nullptr, t);
    std::size_t tp = 0, flagged = 0;
    for (const auto& v : c.verdicts) {
      if (!v.is_spammer) continue;
      ++flagged;
      tp += stream.truth.is_spammer(v.node) ? 1 : 0;
    }
    const double planted = static_cast<double>(stream.truth.spammers.size());
    const double precision = flagged ? static_cast<double>(tp) / static_cast<double>(flagged) : 0.0;
    const double recall = static_cast<double>(tp) / planted;

    const auto screen = ci_screen(stream.events, g, t);
    const std::set<NodeId> screened(screen.begin(), screen.end());
    std::size_t screen_hits = 0, high_ci = 0;
    for (const NodeId& s : stream.truth.spammers) {
      screen_hits += screened.count(s);
      const auto ci = contribution_index(stream.events, s, Channel::email);
      high_ci += ci && *ci >= 0.8 ? 1 : 0;
    }
    const double screen_recall = static_cast<double>(screen_hits) / planted;
    const double ci_share = static_cast<double>(high_ci) / planted;
    const std::string tag = "seed " + std::to_string(seed);
    o.require(precision >= 0.9, tag + " precision " + fmt(precision));
    o.require(recall >= 0.9, tag + " recall " + fmt(recall));
    o.require(screen_recall >= 0.9, tag + " screen recall " + fmt(screen_recall));
    o.require(ci_share >= 0.9, tag + " spammers with CI >= 0.8: " + fmt(ci_share));
    min_precision = std::min(min_precision, precision);
    min_recall = std::min(min_recall, recall);
    min_screen = std::min(min_screen, screen_recall);
    min_ci_share = std::min(min_ci_share, ci_share);
  }
  o.detail = "min precision " + fmt(min_precision) + ", recall " + fmt(min_recall) + ", screen recall " +
             fmt(min_screen) + ", CI share " + fmt(min_ci_share);
  return o;
}

// ---------------------------------------------------------------- C6
std::vector<MessageEvent> repeat(const std::string& id, int count, std::int64_t start, const std::string& from,
                                 const std::string& to) {
  std::vector<MessageEvent> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(support::email(id + std::to_string(i), start + i, from, {to}));
  }
  return out;
}

Outcome criterion_6() {
  Outcome o;
  std::mt19937_64 rng(606);
  std::size_t nodes_checked = 0, spam_seen = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    CriteriaEvaluation eval;
    eval.channel = trial % 2 ? Channel::micropost : Channel::email;
    const std::size_t n = 2 + rng() % 10;
    eval.signals.resize(n);
    eval.static_criteria.resize(n);
    eval.received_from.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      eval.signals[v].node = NodeId("n" + std::to_string(v));
      std::uint8_t bits = static_cast<std::uint8_t>(rng() % 16) & ~static_cast<std::uint8_t>(Criterion::B);
      if (eval.channel == Channel::email) bits &= ~static_cast<std::uint8_t>(Criterion::D);
      eval.static_criteria[v] = CriteriaSet::from_bits(bits);
      for (std::size_t u = 0; u < n; ++u) {
        if (u != v && rng() % 3 == 0) {
          eval.received_from[v].emplace_back(static_cast<NodeIndex>(u), 1 + rng() % 3);
        }
      }
    }
    eval.criteria = eval.static_criteria;
    SpamThresholds t;
    t.min_received_nonspam = rng() % 3;
    t.max_fixed_point_iters = 1 + static_cast<int>(rng() % 6);
    const Classification c = classify(eval, t);

    // The B flags of the final sets were computed against the spam set of
    // the previous iteration (empty before the first).
    std::vector<bool> prior(n, false);
    if (c.history.size() >= 2) prior = c.history[c.history.size() - 2];
    for (std::size_t v = 0; v < n; ++v) {
      const SpamVerdict& verdict = c.verdicts[v];
      std::uint64_t inbound = 0;
      for (const auto& [u, k] : eval.received_from[v]) inbound += prior[u] ? 0 : k;
      o.require(verdict.satisfied.has(Criterion::B) == (inbound <= t.min_received_nonspam),
                "trial " + std::to_string(trial) + " B flag");
      const CriteriaSet s = verdict.satisfied;
      int count = (s.has(Criterion::A) ? 1 : 0) + (s.has(Criterion::B) ? 1 : 0) + (s.has(Criterion::C) ? 1 : 0);
      int needed = 2;
      if (eval.channel == Channel::micropost) {
        count += s.has(Criterion::D) ? 1 : 0;
        needed = 3;
      }
      o.require(verdict.is_spammer == (count >= needed), "trial " + std::to_string(trial) + " node " +
                                                             std::to_string(v) + " biconditional");
      o.require(verdict.is_spammer == c.history.back()[v], "trial " + std::to_string(trial) + " history");
      ++nodes_checked;
      spam_seen += verdict.is_spammer ? 1 : 0;
    }
  }

  // Three-node chain: x becomes a spammer only once y is judged one.
  std::vector<MessageEvent> ev = repeat("y", 5, 0, "y", "x");
  for (auto& e : repeat("yz", 5, 100, "y", "z")) ev.push_back(e);
  for (auto& e : repeat("z", 2, 200, "z", "y")) ev.push_back(e);
  for (auto& e : repeat("x", 1, 300, "x", "z")) ev.push_back(e);
  sort_events(ev);
  const CommGraph g = build_graph(ev, Channel::email);
  LabelTable labels;
  labels.labels[NodeId("y")] = SpamLabel::spam;
  labels.labels[NodeId("x")] = SpamLabel::spam;
  SpamThresholds t;
  t.high_volume_percentile = 60;
  const Classification c = detect_spammers(ev, g, &labels, t);
  const NodeIndex x = *g.find(NodeId("x")), y = *g.find(NodeId("y"));
  o.require(c.converged, "chain did not converge");
  o.require(c.history.size() >= 2 && c.history[0][y] && !c.history[0][x] && c.history[1][x],
            "chain membership sequence");
  for (std::size_t k = 1; k < c.history.size(); ++k) {
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      o.require(!c.history[k - 1][v] || c.history[k][v], "chain not monotone at iteration " + std::to_string(k));
    }
  }
  o.detail = "10000 criteria sets, " + std::to_string(nodes_checked) + " nodes (" + std::to_string(spam_seen) +
             " spammers); chain monotone over " + std::to_string(c.history.size()) + " iterations";
  return o;
}

// ---------------------------------------------------------------- C7
Outcome criterion_7() {
  Outcome o;
  int wins = 0;
  std::string values;
  for (const std::uint64_t seed : kSeeds) {
    const auto stream = synthesize(default_synth(seed));
    const LexiconScorer scorer(default_lexicon());
    const CorpusModel model = build_corpus_model(stream.events);
    const SemanticReport rep = subject_body_correlation(stream.events, scorer, model);
    // body_complexity vs subject_complexity
    const auto& author = rep.author_level.r[2][3];
    const auto& email = rep.email_level.r[2][3];
    if (author && email && *author > *email) ++wins;
    values += (values.empty() ? "" : ", ") + (author ? fmt(*author, 3) : "NA") + "/" +
              (email ? fmt(*email, 3) : "NA");
  }
  o.require(wins >= 4, "author-level above email-level in " + std::to_string(wins) + "/5");
  o.detail = std::to_string(wins) + "/5 seeds (author/email r: " + values + ")";
  return o;
}

// ---------------------------------------------------------------- C8
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(const std::string& command) {
  const int rc = std::system(command.c_str());
  return rc;
}

Outcome criterion_8() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("netstab_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string cli = std::string("\"") + NETSTAB_CLI_PATH + "\"";
  auto path = [&](const char* name) { return "\"" + (dir / name).string() + "\""; };

  for (const char* name : {"run1.json", "run2.json"}) {
    const int rc = run(cli + " synth --n 1000 --seed 42 | " + cli + " stability -i - --seed 42 --out " + path(name));
    o.require(rc == 0, std::string("pipeline run ") + name + " exit " + std::to_string(rc));
  }
  const std::string a = slurp(dir / "run1.json"), b = slurp(dir / "run2.json");
  o.require(!a.empty() && a == b, "pipeline reports differ");

  o.require(run(cli + " synth --n 1000 --seed 9 --out-messages " + path("stream.csv")) == 0, "synth failed");
  o.require(run(cli + " --threads 1 stability -i " + path("stream.csv") + " --out " + path("t1.json")) == 0,
            "threads 1 failed");
  o.require(run(cli + " --threads 8 stability -i " + path("stream.csv") + " --out " + path("t8.json")) == 0,
            "threads 8 failed");
  const std::string t1 = slurp(dir / "t1.json"), t8 = slurp(dir / "t8.json");
  o.require(!t1.empty() && t1 == t8, "--threads 1 and --threads 8 reports differ");
  o.detail = "pipeline report " + std::to_string(a.size()) + " bytes twice; threads 1 vs 8 on n=1000";
  fs::remove_all(dir);
  return o;
}

// ---------------------------------------------------------------- C9
Outcome criterion_9() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("netstab_scale_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string cli = std::string("\"") + NETSTAB_CLI_PATH + "\"";
  const std::string stream = "\"" + (dir / "stream.csv").string() + "\"";
  const std::string report = "\"" + (dir / "report.json").string() + "\"";

  SynthConfig c;
  c.n = 20000;
  c.m_attach = 2;
  c.seed = 7;
  const auto synth = synthesize(c);
  const CommGraph g = build_graph(synth.events, Channel::email);
  o.require(run(cli + " synth --n 20000 --m-attach 2 --seed 7 --out-messages " + stream) == 0, "synth failed");

  const auto t0 = Clock::now();
  const int rc = run(cli + " stability -i " + stream + " --out " + report);
  const double elapsed = seconds_since(t0);
  o.require(rc == 0, "stability exit " + std::to_string(rc));
  const std::string text = slurp(dir / "report.json");
  for (const char* plan : {"\"spammers\"", "\"bottom\"", "\"top1\"", "\"top5\"", "\"top10\"", "\"top1+bottom\"",
                           "\"spammers+bottom\""}) {
    o.require(text.find(plan) != std::string::npos, std::string("plan ") + plan + " missing");
  }
  const unsigned cores = std::max(1u, std::thread::hardware_concurrency());
  o.require(elapsed < 600.0, "runtime " + fmt(elapsed, 4) + " s on " + std::to_string(cores) + " core(s)");
  o.detail = "n=" + std::to_string(g.node_count()) + " m=" + std::to_string(g.arc_count()) + ", " +
             std::to_string(synth.events.size()) + " messages, " + fmt(elapsed, 4) + " s on " +
             std::to_string(cores) + " core(s)";
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::function<Outcome()>> criteria = {
      {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4}, {5, criterion_5},
      {6, criterion_6}, {7, criterion_7}, {8, criterion_8}, {9, criterion_9}};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (const auto& [k, f] : criteria) selected.push_back(k);
  }
  bool all = true;
  for (const int k : selected) {
    const auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::cerr << "unknown criterion " << k << '\n';
      return 2;
    }
    Outcome out;
    try {
      out = it->second();
    } catch (const std::exception& e) {
      out.pass = false;
      out.failures.push_back(std::string("exception: ") + e.what());
    }
    all = all && out.pass;
    std::cout << 'C' << k << (out.pass ? " PASS " : " FAIL ") << out.detail << '\n';
    for (const auto& f : out.failures) std::cout << "    " << f << '\n';
    std::cout.flush();
  }
  return all ? 0 : 1;
}
