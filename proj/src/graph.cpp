#include "spectral/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "spectral/errors.hpp"

namespace spectral {

namespace {

[[noreturn]] void fail_line(int line_no, const std::string& what) {
  std::ostringstream msg;
  msg << "line " << line_no << ": " << what;
  throw ParseError(msg.str());
}

// Strict token parse: the whole token must be consumed.
bool parse_int(std::string_view tok, long long& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_double(std::string_view tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

// Splits on single spaces; empty fields mean a malformed line.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(' ', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

}  // namespace

WeightedGraph::WeightedGraph(int vertex_count, std::vector<Edge> edges)
    : n_(vertex_count) {
  if (n_ < 1) throw std::invalid_argument("graph needs at least one vertex");
  for (Edge& e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u == e.v) {
      std::ostringstream msg;
      msg << "self-loop at vertex " << e.u;
      throw std::invalid_argument(msg.str());
    }
    if (e.u < 0 || e.v >= n_) {
      std::ostringstream msg;
      msg << "edge (" << e.u << "," << e.v << ") out of range for " << n_ << " vertices";
      throw std::invalid_argument(msg.str());
    }
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      std::ostringstream msg;
      msg << "edge (" << e.u << "," << e.v << ") has non-positive weight " << e.w;
      throw std::invalid_argument(msg.str());
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (!edges_.empty() && edges_.back().u == e.u && edges_.back().v == e.v)
      edges_.back().w += e.w;  // duplicates merge by weight
    else
      edges_.push_back(e);
  }
}

std::vector<int> WeightedGraph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(n_), 0);
  for (const Edge& e : edges_) {
    ++deg[static_cast<std::size_t>(e.u)];
    ++deg[static_cast<std::size_t>(e.v)];
  }
  return deg;
}

WeightedGraph parse_graph(std::istream& in) {
  int line_no = 0;
  bool have_n = false;
  long long n = 0;
  std::vector<Edge> edges;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') continue;
    if (!have_n) {
      if (!parse_int(line, n) || n < 1)
        fail_line(line_no, "expected positive vertex count, got \"" + line + "\"");
      have_n = true;
      continue;
    }
    auto fields = split_fields(line);
    if (fields.size() != 3)
      fail_line(line_no, "expected `u v w`, got \"" + line + "\"");
    long long u = 0, v = 0;
    double w = 0.0;
    if (!parse_int(fields[0], u) || !parse_int(fields[1], v))
      fail_line(line_no, "malformed vertex id in \"" + line + "\"");
    if (!parse_double(fields[2], w))
      fail_line(line_no, "malformed weight in \"" + line + "\"");
    if (u < 0 || u >= n || v < 0 || v >= n)
      fail_line(line_no, "vertex id out of range [0, " + std::to_string(n) + ")");
    if (u == v) fail_line(line_no, "self-loop on vertex " + std::to_string(u));
    if (!(w > 0.0) || !std::isfinite(w))
      fail_line(line_no, "weight must be a positive finite number");
    edges.push_back({static_cast<int>(u), static_cast<int>(v), w});
  }
  if (!have_n) throw ParseError("missing vertex count line");
  return WeightedGraph(static_cast<int>(n), std::move(edges));
}

WeightedGraph parse_graph(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

WeightedGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file: " + path);
  return parse_graph(in);
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

void write_graph(std::ostream& out, const WeightedGraph& g) {
  out << g.vertex_count() << '\n';
  for (const Edge& e : g.edges())
    out << e.u << ' ' << e.v << ' ' << format_double(e.w) << '\n';
}

void write_graph_file(const std::string& path, const WeightedGraph& g) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file: " + path);
  write_graph(out, g);
  out.flush();
  if (!out) throw Error("failed writing graph to: " + path);
}

std::string to_edge_list(const WeightedGraph& g) {
  std::ostringstream out;
  write_graph(out, g);
  return out.str();
}

SymmetricMatrix laplacian(const WeightedGraph& g) {
  SymmetricMatrix l(g.vertex_count());
  for (const Edge& e : g.edges()) {
    l.add(e.u, e.u, e.w);
    l.add(e.v, e.v, e.w);
    l.add(e.u, e.v, -e.w);
  }
  return l;
}

IncidenceSystem incidence(const WeightedGraph& g) {
  const int m = g.edge_count();
  IncidenceSystem sys;
  sys.b = Eigen::MatrixXd::Zero(m, g.vertex_count());
  sys.weights.resize(m);
  for (int e = 0; e < m; ++e) {
    const Edge& edge = g.edges()[static_cast<std::size_t>(e)];
    sys.b(e, edge.u) = -1.0;  // tail
    sys.b(e, edge.v) = 1.0;   // head
    sys.weights[e] = edge.w;
  }
  return sys;
}

SymmetricMatrix incidence_laplacian(const IncidenceSystem& sys) {
  const Eigen::Index n = sys.b.cols();
  SymmetricMatrix l(n);
  for (Eigen::Index e = 0; e < sys.b.rows(); ++e) {
    Eigen::Index tail = -1, head = -1;
    for (Eigen::Index v = 0; v < n; ++v) {
      if (sys.b(e, v) < 0) tail = v;
      if (sys.b(e, v) > 0) head = v;
    }
    if (tail < 0 || head < 0)
      throw std::invalid_argument("incidence row lacks a +1/-1 pair");
    const double w = sys.weights[e];
    l.add(tail, tail, w);
    l.add(head, head, w);
    l.add(std::min(tail, head), std::max(tail, head), -w);
  }
  return l;
}

bool is_connected(const WeightedGraph& g) {
  return connected_components(g).size() == 1;
}

std::vector<std::vector<int>> connected_components(const WeightedGraph& g) {
  const int n = g.vertex_count();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const Edge& e : g.edges()) {
    adj[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<std::vector<int>> components;
  for (int root = 0; root < n; ++root) {
    if (seen[static_cast<std::size_t>(root)]) continue;
    std::vector<int> comp;
    std::deque<int> queue{root};
    seen[static_cast<std::size_t>(root)] = true;
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      comp.push_back(x);
      for (int y : adj[static_cast<std::size_t>(x)]) {
        if (!seen[static_cast<std::size_t>(y)]) {
          seen[static_cast<std::size_t>(y)] = true;
          queue.push_back(y);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  return components;
}

}  // namespace spectral
