#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "decflow/graph.hpp"

namespace decflow {

// Extended DIMACS format:
//   p <n> <m>
//   n <id> <cap> <cost>        (optional vertex lines)
//   e <u> <v> <w>
// Update files hold one record per line:
//   d <u> <v>                  (delete)
//   i <u> <v> <w>              (weight increase)
// '#' starts a comment.

struct ParseError : Error {
  ParseError(const std::string& msg, int line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_no(line) {}
  int line_no;
};

inline DynGraph read_graph(std::istream& in) {
  std::string line;
  int line_no = 0;
  bool saw_header = false;
  long long n = 0, m = 0;
  std::vector<std::tuple<VertexId, VertexId, double>> edges;
  std::map<VertexId, double> caps, costs;
  std::vector<VertexId> extra;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "p") {
      if (!(ls >> n >> m)) throw ParseError("bad p line", line_no);
      saw_header = true;
    } else if (tag == "n") {
      VertexId v;
      double cap, cost;
      if (!(ls >> v >> cap >> cost)) throw ParseError("bad n line", line_no);
      caps[v] = cap;
      costs[v] = cost;
      extra.push_back(v);
    } else if (tag == "e") {
      VertexId u, v;
      double w;
      if (!(ls >> u >> v >> w)) throw ParseError("bad e line", line_no);
      edges.push_back({u, v, w});
    } else {
      throw ParseError("unknown record '" + tag + "'", line_no);
    }
  }
  if (!saw_header) throw ParseError("missing p header", 0);
  if (static_cast<long long>(edges.size()) != m)
    throw ParseError("edge count mismatch: header says " + std::to_string(m) + ", file has " +
                         std::to_string(edges.size()),
                     line_no);
  return DynGraph::build(edges, caps, costs, extra);
}

inline DynGraph read_graph_file(const std::string& path) {
  std::ifstream f(path);
  DECFLOW_CHECK(f.good(), "cannot open graph file " << path);
  return read_graph(f);
}

inline std::vector<UpdateOp> read_updates(std::istream& in) {
  std::vector<UpdateOp> ops;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "d") {
      VertexId u, v;
      if (!(ls >> u >> v)) throw ParseError("bad d line", line_no);
      ops.push_back({UpdateOp::kDelete, u, v, 0.0});
    } else if (tag == "i") {
      VertexId u, v;
      double w;
      if (!(ls >> u >> v >> w)) throw ParseError("bad i line", line_no);
      ops.push_back({UpdateOp::kIncrease, u, v, w});
    } else {
      throw ParseError("unknown update record '" + tag + "'", line_no);
    }
  }
  return ops;
}

inline std::vector<UpdateOp> read_updates_file(const std::string& path) {
  std::ifstream f(path);
  DECFLOW_CHECK(f.good(), "cannot open update file " << path);
  return read_updates(f);
}

inline void write_graph(std::ostream& out, const DynGraph& g) {
  auto edges = g.undirected_edges();
  out << "p " << g.num_vertices() << " " << edges.size() << "\n";
  for (VertexId v : g.vertices()) {
    double cap = g.vertex_cap(v), cost = g.vertex_cost(v);
    if (cap != kInf || cost != 0.0)
      out << "n " << v << " " << (cap == kInf ? -1.0 : cap) << " " << cost << "\n";
  }
  for (auto& [u, v, w] : edges) out << "e " << u << " " << v << " " << w << "\n";
}

}  // namespace decflow
