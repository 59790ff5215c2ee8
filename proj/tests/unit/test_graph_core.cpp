#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "../support.hpp"
#include "netstab/export.hpp"
#include "netstab/ingest.hpp"
#include "netstab/synth.hpp"

using namespace netstab;
using support::at;
using support::email;
using support::post;

TEST_CASE("account canonicalization") {
  CHECK(canonicalize_account("  Jane Doe <Jane@X.com> ") == "jane@x.com");
  CHECK(canonicalize_account("@Alice") == "alice");
  CHECK(canonicalize_account("   ") == "");
  const std::string once = canonicalize_account("\"Bob\" <BOB@y.org>");
  CHECK(canonicalize_account(once) == once);
  CHECK_THROWS_AS(NodeId("  "), InputError);
}

TEST_CASE("timestamps and durations") {
  const auto t = parse_timestamp("2020-01-01T00:00:00Z");
  REQUIRE(t);
  CHECK(*t == at(0));
  CHECK(parse_timestamp("2020-01-01T01:30:00+01:30") == at(0));
  CHECK(parse_timestamp("2020-01-01T00:00:05.999Z") == at(5));
  CHECK(parse_timestamp("2020-01-01T00:00:00") == at(0));
  CHECK_FALSE(parse_timestamp("not-a-date"));
  CHECK_FALSE(parse_timestamp("2020-02-30T00:00:00Z"));
  CHECK(format_timestamp(at(3661)) == "2020-01-01T01:01:01Z");

  CHECK(parse_duration("30d") == Duration{30 * 86400});
  CHECK(parse_duration("2h") == Duration{7200});
  CHECK(parse_duration("15m") == Duration{900});
  CHECK(parse_duration("7s") == Duration{7});
  CHECK_THROWS_AS(parse_duration("7"), InputError);
  CHECK(parse_duration("0d") == Duration{0});
  CHECK_THROWS_AS(parse_duration("-1d"), InputError);
  CHECK_THROWS_AS(parse_duration("3w"), InputError);
  CHECK(parse_duration(format_duration(Duration{14 * 86400})) == Duration{14 * 86400});
}

TEST_CASE("ingest email csv") {
  const std::string header = "message_id,timestamp,sender,recipients,in_reply_to,subject,body\n";

  SUBCASE("header only") {
    std::istringstream in(header);
    const auto r = ingest(in, InputFormat::email_csv);
    CHECK(r.events.empty());
    CHECK(r.rejects.empty());
  }
  SUBCASE("single record") {
    std::istringstream in(header + "m1,2020-01-01T00:00:00Z,a@x.com,b@x.com,,hello,hi\n");
    const auto r = ingest(in, InputFormat::email_csv);
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].sender.str() == "a@x.com");
    REQUIRE(r.events[0].recipients.size() == 1);
    CHECK(r.events[0].recipients[0].str() == "b@x.com");
    CHECK(r.events[0].subject_text == "hello");
    CHECK(r.events[0].body_text == "hi");
    CHECK_FALSE(r.events[0].in_reply_to);
  }
  SUBCASE("malformed timestamp is rejected with its line") {
    std::istringstream in(header + "m1,not-a-date,a@x.com,b@x.com,,s,b\n");
    const auto r = ingest(in, InputFormat::email_csv);
    CHECK(r.events.empty());
    REQUIRE(r.rejects.size() == 1);
    CHECK(r.rejects[0].line == 2);
  }
  SUBCASE("quoted fields spanning lines and sorting") {
    std::istringstream in(header +
                          "m2,2020-01-02T00:00:00Z,a@x.com,\"b@x.com; C@x.com\",,s,\"line one\nline \"\"two\"\"\"\n"
                          "m1,2020-01-01T00:00:00Z,b@x.com,a@x.com,,,\n");
    const auto r = ingest(in, InputFormat::email_csv);
    REQUIRE(r.events.size() == 2);
    CHECK(r.events[0].message_id == "m1");
    CHECK_FALSE(r.events[0].subject_text);
    CHECK(r.events[1].recipients.size() == 2);
    CHECK(r.events[1].recipients[1].str() == "c@x.com");
    CHECK(r.events[1].body_text == "line one\nline \"two\"");
  }
  SUBCASE("too many malformed rows abort") {
    std::string text = header;
    for (int i = 0; i < 20; ++i) {
      text += "m" + std::to_string(i) + "," + (i % 3 == 0 ? "bad" : "2020-01-01T00:00:00Z") + ",a,b,,,\n";
    }
    std::istringstream in(text);
    CHECK_THROWS_AS(ingest(in, InputFormat::email_csv), IngestError);
  }
  SUBCASE("bad header") {
    std::istringstream in("id,when\n");
    CHECK_THROWS_AS(ingest(in, InputFormat::email_csv), InputError);
  }
  SUBCASE("round trip through the writer") {
    std::vector<MessageEvent> events{email("m1", 0, "a", {"b", "c"}), email("m2", 60, "b", {"a"}, "m1")};
    events[0].subject_text = "Hi, there";
    events[0].body_text = "multi\nline \"quoted\"";
    std::stringstream buf;
    write_email_csv(buf, events);
    const auto r = ingest(buf, InputFormat::email_csv);
    REQUIRE(r.events.size() == 2);
    CHECK(r.events[0].subject_text == events[0].subject_text);
    CHECK(r.events[0].body_text == events[0].body_text);
    CHECK(r.events[1].in_reply_to == "m1");
    CHECK(r.events[0].recipients == events[0].recipients);
  }
}

TEST_CASE("ingest micropost jsonl") {
  std::istringstream in(
      R"({"id":"1","created_at":"2020-01-01T00:00:00Z","author":"@Ann","text":"hi @bob","mentions":["bob","@Bob"],"in_reply_to":null,"retweet_of":null,"author_followers":10,"author_following":20})"
      "\n\n"
      R"({"id":2,"created_at":"2020-01-01T00:01:00Z","author":"bob","text":"yo","mentions":[],"in_reply_to":"1","retweet_of":null,"author_followers":null,"author_following":null})"
      "\n"
      "{not json}\n");
  const auto r = ingest(in, InputFormat::micropost_jsonl);
  REQUIRE(r.events.size() == 2);
  CHECK(r.rows == 3);
  REQUIRE(r.rejects.size() == 1);
  CHECK(r.rejects[0].line == 4);
  CHECK(r.events[0].sender.str() == "ann");
  CHECK(r.events[0].recipients.size() == 1);
  CHECK(r.events[0].author_following == 20);
  CHECK(r.events[1].message_id == "2");
  CHECK(r.events[1].in_reply_to == "1");
  CHECK_FALSE(r.events[1].author_followers);

  std::stringstream buf;
  write_micropost_jsonl(buf, r.events);
  const auto again = ingest(buf, InputFormat::micropost_jsonl);
  REQUIRE(again.events.size() == 2);
  CHECK(again.events[0].author_followers == 10);
  CHECK(again.events[1].in_reply_to == "1");
}

TEST_CASE("missing input file names the path") {
  try {
    ingest(std::filesystem::path("/nonexistent/dir/file.csv"), InputFormat::email_csv);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/file.csv") != std::string::npos);
  }
}

TEST_CASE("build_graph") {
  SUBCASE("empty") {
    const CommGraph g = build_graph({}, Channel::email);
    CHECK(g.node_count() == 0);
    CHECK(g.arc_count() == 0);
  }
  SUBCASE("aggregation") {
    const std::vector<MessageEvent> ev{email("1", 0, "a", {"b"}), email("2", 5, "a", {"b"})};
    const CommGraph g = build_graph(ev, Channel::email);
    CHECK(g.node_count() == 2);
    REQUIRE(g.arc_count() == 1);
    CHECK(g.arcs()[0].weight == 2);
    CHECK(g.arcs()[0].first_seen == at(0));
    CHECK(g.arcs()[0].last_seen == at(5));
  }
  SUBCASE("micropost mentions and replies") {
    std::vector<MessageEvent> ev{post("c1", 0, "c", {}), post("a1", 10, "a", {"b"})};
    ev[1].in_reply_to = "c1";
    const CommGraph g = build_graph(ev, Channel::micropost);
    CHECK(g.arc_count() == 2);
    const NodeIndex a = *g.find(NodeId("a"));
    CHECK(g.find_arc(a, *g.find(NodeId("b"))));
    CHECK(g.find_arc(a, *g.find(NodeId("c"))));
  }
  SUBCASE("retweets, dangling references and self-loops") {
    std::vector<MessageEvent> ev{post("c1", 0, "c", {}), post("a1", 10, "a", {"a"}), post("a2", 20, "a", {})};
    ev[1].retweet_of = "c1";
    ev[2].in_reply_to = "gone";
    const CommGraph g = build_graph(ev, Channel::micropost);
    CHECK(g.arc_count() == 1);
    CHECK(g.build_stats().dangling_references == 1);
    CHECK(g.build_stats().dropped_self_loops == 1);
  }
  SUBCASE("email weight conservation") {
    const std::vector<MessageEvent> ev{email("1", 0, "a", {"b", "c", "a"}), email("2", 1, "b", {"c"}),
                                       email("3", 2, "c", {"a", "b"})};
    const CommGraph g = build_graph(ev, Channel::email);
    CHECK(g.total_weight() == 3 + 1 + 2 - 1);
    CHECK(g.build_stats().dropped_self_loops == 1);
  }
  SUBCASE("input order does not matter") {
    std::vector<MessageEvent> ev{email("1", 0, "a", {"b"}), email("2", 0, "b", {"c"}), email("3", 9, "c", {"a"}),
                                 email("4", 3, "a", {"c"})};
    const CommGraph g1 = build_graph(ev, Channel::email);
    std::reverse(ev.begin(), ev.end());
    const CommGraph g2 = build_graph(ev, Channel::email);
    REQUIRE(g1.arc_count() == g2.arc_count());
    for (std::size_t i = 0; i < g1.arc_count(); ++i) {
      CHECK(g1.arcs()[i].source == g2.arcs()[i].source);
      CHECK(g1.arcs()[i].target == g2.arcs()[i].target);
      CHECK(g1.arcs()[i].weight == g2.arcs()[i].weight);
    }
  }
}

TEST_CASE("CommGraph validation") {
  std::vector<NodeId> nodes{NodeId("a"), NodeId("b")};
  CHECK_THROWS_AS(CommGraph::from_arcs(Channel::email, nodes, {{0, 0, 1, {}, {}}}), InputError);
  CHECK_THROWS_AS(CommGraph::from_arcs(Channel::email, nodes, {{0, 2, 1, {}, {}}}), InputError);
  CHECK_THROWS_AS(CommGraph::from_arcs(Channel::email, nodes, {{0, 1, 0, {}, {}}}), InputError);
  CHECK_THROWS_AS(CommGraph::from_arcs(Channel::email, {NodeId("a"), NodeId("a")}, {}), InputError);
  const CommGraph g = CommGraph::from_arcs(Channel::email, {NodeId("b"), NodeId("a")},
                                           {{0, 1, 2, {}, {}}, {0, 1, 3, {}, {}}});
  CHECK(g.node(0).str() == "a");
  REQUIRE(g.arc_count() == 1);
  CHECK(g.arcs()[0].source == 1);
  CHECK(g.arcs()[0].weight == 5);
  CHECK(g.in_degree(0) == 1);
  CHECK(g.out_degree(1) == 1);
}

TEST_CASE("window_slices") {
  SUBCASE("90 days in 30 day windows") {
    const std::vector<MessageEvent> ev{email("1", 0, "a", {"b"}), email("2", 45 * 86400, "b", {"c"}),
                                       email("3", 90 * 86400, "c", {"a"})};
    const auto s = window_slices(ev, Duration{30 * 86400}, Channel::email);
    REQUIRE(s.windows.size() == 3);
    CHECK(s.windows[0].start == at(0));
    CHECK(s.windows[1].start == s.windows[0].end);
    CHECK(s.windows[2].end == at(90 * 86400));
    CHECK(s.windows[0].graph.arc_count() == 1);
    CHECK(s.windows[1].graph.arc_count() == 1);
    CHECK(s.windows[2].graph.arc_count() == 1);
  }
  SUBCASE("all within one window") {
    const std::vector<MessageEvent> ev{email("1", 0, "a", {"b"}), email("2", 600, "b", {"c", "a"})};
    const auto s = window_slices(ev, Duration{86400}, Channel::email);
    REQUIRE(s.windows.size() == 1);
    const CommGraph full = build_graph(ev, Channel::email);
    CHECK(s.windows[0].graph.arc_count() == full.arc_count());
    CHECK(s.windows[0].graph.total_weight() == full.total_weight());
  }
  SUBCASE("empty middle window") {
    const std::vector<MessageEvent> ev{email("1", 0, "a", {"b"}), email("2", 25 * 86400, "b", {"a"})};
    const auto s = window_slices(ev, Duration{10 * 86400}, Channel::email);
    REQUIRE(s.windows.size() == 3);
    CHECK(s.windows[1].graph.empty());
  }
  SUBCASE("weights are conserved on a synthetic stream") {
    SynthConfig cfg;
    cfg.n = 150;
    cfg.seed = 3;
    const SynthStream stream = synthesize(cfg);
    const CommGraph full = build_graph(stream.events, Channel::email);
    const auto s = window_slices(stream.events, Duration{7 * 86400}, Channel::email);
    std::map<std::pair<std::string, std::string>, std::uint64_t> sum;
    for (const Snapshot& w : s.windows) {
      for (const Arc& a : w.graph.arcs()) {
        CHECK(full.find(w.graph.node(a.source)));
        sum[{w.graph.node(a.source).str(), w.graph.node(a.target).str()}] += a.weight;
      }
    }
    REQUIRE(sum.size() == full.arc_count());
    for (const Arc& a : full.arcs()) {
      CHECK(sum[{full.node(a.source).str(), full.node(a.target).str()}] == a.weight);
    }
  }
}

TEST_CASE("degree_summary") {
  CHECK_THROWS_AS(degree_summary(CommGraph{}), InputError);
  const CommGraph arc = support::graph_of({"a", "b"}, {{0, 1}});
  const auto s1 = degree_summary(arc);
  CHECK(s1.min == 1);
  CHECK(s1.median == 1);
  CHECK(s1.max == 1);
  const CommGraph star = support::graph_of({"c", "l1", "l2", "l3"}, {{0, 1}, {0, 2}, {0, 3}});
  const auto s2 = degree_summary(star);
  CHECK(s2.max == 3);
  CHECK(s2.median == 1);
  CHECK(s2.max_out == 3);
  CHECK(s2.tail_ratio == 3.0);
}

TEST_CASE("degree tail of the synthetic generator") {
  int heavy = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SynthConfig cfg;
    cfg.seed = seed;
    const auto s = degree_summary(gen_scale_free(cfg));
    if (s.tail_ratio && *s.tail_ratio >= 5.0) ++heavy;
  }
  CHECK(heavy >= 18);
}

TEST_CASE("export") {
  const CommGraph g = support::graph_of({"a&b", "c"}, {{0, 1}, {1, 0}});
  std::ostringstream edges;
  write_edge_list(edges, g);
  CHECK(edges.str() == "source,target,weight\na&b,c,1\nc,a&b,1\n");
  std::ostringstream xml;
  write_graphml(xml, g);
  const std::string s = xml.str();
  CHECK(s.find("<graphml") != std::string::npos);
  CHECK(s.find("a&amp;b") != std::string::npos);
  CHECK(s.find("attr.name=\"weight\"") != std::string::npos);
  CHECK(s.find("edgedefault=\"directed\"") != std::string::npos);
}
