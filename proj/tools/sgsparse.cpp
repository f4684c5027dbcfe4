// Command-line front end: generate graphs, sparsify them, verify the
// achieved approximation, and report effective resistances.
//
// Exit codes: 0 success, 1 usage/parse error, 2 disconnected input,
// 3 numerical infeasibility in the selection loop, 4 verification rank
// failure (the candidate sparsifier is singular where the original is not).

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "spectral/barrier_select.hpp"
#include "spectral/graph.hpp"
#include "spectral/random.hpp"
#include "spectral/sparsify.hpp"
#include "spectral/verify.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitDisconnected = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitRankFailure = 4;

std::string fmt(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

spectral::WeightedGraph generate(const std::string& type, int n, double p,
                                 std::uint64_t seed) {
  std::vector<spectral::Edge> edges;
  if (type == "complete") {
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0});
  } else if (type == "path") {
    for (int u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1, 1.0});
  } else if (type == "star") {
    for (int v = 1; v < n; ++v) edges.push_back({0, v, 1.0});
  } else if (type == "random-gnp") {
    spectral::SplitMix64 rng(seed);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng.uniform() < p) edges.push_back({u, v, 1.0});
  } else {
    throw std::invalid_argument("unknown graph type: " + type);
  }
  return spectral::WeightedGraph(n, std::move(edges));
}

int cmd_gen(const std::string& type, int n, std::optional<double> p,
            std::uint64_t seed, const std::string& out) {
  if (n < 2) throw std::invalid_argument("--n must be at least 2");
  if (type == "random-gnp") {
    if (!p) throw std::invalid_argument("--p is required for random-gnp");
    if (!(*p > 0.0) || *p > 1.0) throw std::invalid_argument("--p must lie in (0, 1]");
  } else if (p) {
    throw std::invalid_argument("--p only applies to random-gnp");
  }
  spectral::write_graph_file(out, generate(type, n, p.value_or(0.0), seed));
  return 0;
}

int cmd_sparsify(const std::string& input, double d, const std::string& preset_str,
                 const std::string& output, const std::optional<std::string>& trace_path,
                 bool per_component) {
  const spectral::WeightedGraph g = spectral::read_graph_file(input);
  const spectral::Preset preset = spectral::preset_from_name(preset_str);

  spectral::SelectionOptions options;
  options.record_eigenvalues = trace_path.has_value();

  spectral::SparsifierResult result = [&] {
    try {
      return per_component
                 ? spectral::sparsify_graph_per_component(g, d, preset, options)
                 : spectral::sparsify_graph(g, d, preset, options);
    } catch (const spectral::InfeasibleError& err) {
      if (trace_path) {
        std::ofstream trace_out(*trace_path);
        spectral::write_trace(trace_out, err.partial_trace);
      }
      throw;
    }
  }();

  spectral::write_graph_file(output, result.sparsifier);
  if (trace_path) {
    std::ofstream trace_out(*trace_path);
    if (!trace_out) throw spectral::Error("cannot open trace file: " + *trace_path);
    spectral::write_trace(trace_out, result.trace);
  }
  spectral::write_sparsify_metadata(std::cout, g, result, d, preset);
  return 0;
}

bool is_unit_complete(const spectral::WeightedGraph& g) {
  const long long n = g.vertex_count();
  if (g.edge_count() != n * (n - 1) / 2) return false;
  for (const spectral::Edge& e : g.edges())
    if (e.w != 1.0) return false;
  return true;
}

int cmd_verify(const std::string& original, const std::string& sparse, int pairs,
               std::uint64_t seed) {
  const spectral::WeightedGraph g = spectral::read_graph_file(original);
  const spectral::WeightedGraph h = spectral::read_graph_file(sparse);
  if (g.vertex_count() != h.vertex_count())
    throw std::invalid_argument("graphs have different vertex counts");

  const spectral::ApproximationReport report =
      spectral::approximation_ratio(spectral::laplacian(g), spectral::laplacian(h), 500, seed);

  std::cout << "n: " << g.vertex_count() << '\n';
  std::cout << "lambda_min: " << fmt(report.lambda_min) << '\n';
  std::cout << "lambda_max: " << fmt(report.lambda_max) << '\n';
  std::cout << "kappa: " << fmt(report.kappa) << '\n';
  std::cout << "sampled_min: " << fmt(report.sampled_min) << '\n';
  std::cout << "sampled_max: " << fmt(report.sampled_max) << '\n';
  std::cout << "samples: " << report.samples << '\n';
  std::cout << "seed: " << seed << '\n';

  if (!report.kappa_finite) return kExitRankFailure;

  if (is_unit_complete(g)) {
    const double eps = report.kappa - 1.0;
    spectral::SplitMix64 rng(seed);
    const int n = h.vertex_count();
    int failures = 0;
    for (int k = 0; k < pairs; ++k) {
      std::vector<int> set_s, set_t;
      while (set_s.empty() || set_t.empty()) {
        set_s.clear();
        set_t.clear();
        for (int v = 0; v < n; ++v) {
          const double roll = rng.uniform();
          if (roll < 1.0 / 3.0)
            set_s.push_back(v);
          else if (roll < 2.0 / 3.0)
            set_t.push_back(v);
        }
      }
      if (!spectral::mixing_check(h, set_s, set_t, eps).ok) ++failures;
    }

    const std::vector<int> deg = h.degrees();
    int vertex = 0;
    for (int v = 1; v < n; ++v)
      if (deg[static_cast<std::size_t>(v)] < deg[static_cast<std::size_t>(vertex)]) vertex = v;
    const spectral::DegreeBoundReport bound = spectral::degree_lower_bound(h, vertex);
    const double sd = std::sqrt(static_cast<double>(bound.degree));
    const double constant = (1.0 + 2.0 / sd - bound.bound) * n / sd;

    std::cout << "mixing_pairs: " << pairs << '\n';
    std::cout << "mixing_failures: " << failures << '\n';
    std::cout << "degree_vertex: " << bound.vertex << '\n';
    std::cout << "degree: " << bound.degree << '\n';
    std::cout << "degree_lower_bound: " << fmt(bound.bound) << '\n';
    std::cout << "degree_bound_constant: " << fmt(constant) << '\n';
  }
  return 0;
}

int cmd_resist(const std::string& input, const std::vector<int>& edge) {
  const spectral::WeightedGraph g = spectral::read_graph_file(input);
  const spectral::ResistanceCalculator calc(g);
  if (!edge.empty()) {
    std::cout << "resistance: " << fmt(calc(edge[0], edge[1])) << '\n';
    return 0;
  }
  double total = 0.0;
  for (const spectral::Edge& e : g.edges()) {
    const double r = calc(e.u, e.v);
    total += e.w * r;
    std::cout << e.u << ' ' << e.v << ' ' << fmt(r) << '\n';
  }
  std::cout << "total_weighted_resistance: " << fmt(total) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic spectral graph sparsification"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a graph in edge-list format");
  std::string gen_type;
  int gen_n = 0;
  std::optional<double> gen_p;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--type", gen_type, "complete | random-gnp | path | star")->required();
  gen->add_option("--n", gen_n, "number of vertices")->required();
  gen->add_option("--p", gen_p, "edge probability for random-gnp");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--out", gen_out, "output path")->required();

  // sparsify
  auto* sparsify = app.add_subcommand("sparsify", "Compute a spectral sparsifier");
  std::string sp_input, sp_output, sp_preset = "standard";
  std::optional<std::string> sp_trace;
  double sp_d = 0.0;
  bool sp_per_component = false;
  sparsify->add_option("--input", sp_input, "input graph")->required();
  sparsify->add_option("--d", sp_d, "edge budget factor, > 1")->required();
  sparsify->add_option("--preset", sp_preset, "standard | simple");
  sparsify->add_option("--output", sp_output, "output graph path")->required();
  sparsify->add_option("--trace", sp_trace, "per-step trace output path");
  sparsify->add_flag("--per-component", sp_per_component,
                     "sparsify each connected component");

  // verify
  auto* verify = app.add_subcommand("verify", "Measure the approximation quality");
  std::string vf_original, vf_sparse;
  int vf_pairs = 100;
  std::uint64_t vf_seed = 0;
  verify->add_option("--original", vf_original, "original graph")->required();
  verify->add_option("--sparse", vf_sparse, "candidate sparsifier")->required();
  verify->add_option("--pairs", vf_pairs, "random disjoint set pairs for mixing checks");
  verify->add_option("--seed", vf_seed, "sampling seed");

  // resist
  auto* resist = app.add_subcommand("resist", "Effective resistance diagnostics");
  std::string rs_input;
  std::vector<int> rs_edge;
  resist->add_option("--input", rs_input, "input graph")->required();
  resist->add_option("--edge", rs_edge, "vertex pair u v")->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_type, gen_n, gen_p, gen_seed, gen_out);
    if (sparsify->parsed())
      return cmd_sparsify(sp_input, sp_d, sp_preset, sp_output, sp_trace, sp_per_component);
    if (verify->parsed()) return cmd_verify(vf_original, vf_sparse, vf_pairs, vf_seed);
    if (resist->parsed()) return cmd_resist(rs_input, rs_edge);
  } catch (const spectral::DisconnectedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDisconnected;
  } catch (const spectral::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const spectral::DegeneracyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const spectral::BarrierViolationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
