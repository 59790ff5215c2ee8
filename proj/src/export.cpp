#include "netstab/export.hpp"

#include <ostream>

#include "netstab/ingest.hpp"

namespace netstab {

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

void write_graphml(std::ostream& out, const CommGraph& graph) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
         "  <key id=\"id\" for=\"node\" attr.name=\"id\" attr.type=\"string\"/>\n"
         "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n"
         "  <graph id=\"G\" edgedefault=\"directed\">\n";
  for (NodeIndex v = 0; v < graph.node_count(); ++v) {
    out << "    <node id=\"n" << v << "\"><data key=\"id\">" << xml_escape(graph.node(v).str())
        << "</data></node>\n";
  }
  for (const Arc& a : graph.arcs()) {
    out << "    <edge source=\"n" << a.source << "\" target=\"n" << a.target
        << "\"><data key=\"weight\">" << a.weight << "</data></edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

void write_edge_list(std::ostream& out, const CommGraph& graph) {
  out << "source,target,weight\n";
  for (const Arc& a : graph.arcs()) {
    out << csv::quote(graph.node(a.source).str()) << ',' << csv::quote(graph.node(a.target).str())
        << ',' << a.weight << '\n';
  }
}

}  // namespace netstab
