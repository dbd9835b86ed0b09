#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "graphmine/bench.hpp"
#include "graphmine/community.hpp"
#include "graphmine/error.hpp"
#include "graphmine/eval.hpp"
#include "graphmine/graph.hpp"
#include "graphmine/graph_embedding.hpp"
#include "graphmine/io.hpp"
#include "graphmine/node_embedding.hpp"

// Command implementations behind the `graphmine` executable. Each returns a
// process exit code: 0 ok, 2 input or validation error, 3 graph contract
// violation. Payload goes to `out` (or the --out file), diagnostics to `err`.
namespace graphmine::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitGraph = 3;

struct GenerateOptions {
  std::int64_t nodes = 0;
  std::int64_t edges = 0;
  std::uint64_t seed = 42;
  bool connected = false;
  std::string out;
};

struct ClusterOptions {
  std::string algo;
  std::string graph;
  std::string out;
  std::uint64_t seed = 42;
  std::optional<std::size_t> max_iterations;     // label-propagation
  std::optional<std::size_t> refinement_rounds;  // scd
  std::optional<std::size_t> dimensions;         // symnmf
  std::optional<std::size_t> iterations;         // symnmf
};

struct EmbedNodesOptions {
  std::string algo;
  std::string graph;
  std::string out;
  std::uint64_t seed = 42;
  std::optional<std::size_t> dimensions;
  std::optional<std::size_t> walk_number;
  std::optional<std::size_t> walk_length;
  std::optional<std::size_t> window_size;
  std::optional<std::size_t> negative_samples;
  std::optional<std::size_t> epochs;
  std::optional<double> learning_rate;
  std::optional<std::size_t> order;     // netmf
  std::optional<double> negatives;      // netmf
  std::size_t threads = 1;
};

struct EmbedGraphsOptions {
  std::string algo;
  std::string corpus;
  std::string out;
  std::uint64_t seed = 42;
  std::optional<std::size_t> dimensions;
  std::optional<std::size_t> wl_iterations;
};

struct EvalNmiOptions {
  std::string first;
  std::string second;
};

struct EvalModularityOptions {
  std::string graph;
  std::string memberships;
};

struct EvalClassifyOptions {
  std::string embedding;
  std::string labels;
  double ratio = 0.8;
  std::uint64_t seed = 42;
};

struct BenchCommandOptions {
  BenchOptions bench;
  std::string out;
};

namespace detail {

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open \"" + path + "\"");
  return in;
}

/// Renders the payload into a buffer first so a failing command never leaves
/// a partial output file behind.
inline void emit(const std::string& path, std::ostream& out,
                 const std::function<void(std::ostream&)>& write) {
  std::ostringstream buffer;
  write(buffer);
  if (path.empty() || path == "-") {
    out << buffer.str();
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) fail(ErrorCode::InvalidArgument, "cannot write \"" + path + "\"");
  file << buffer.str();
}

inline int guarded(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::DisconnectedGraph ? kExitGraph : kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

inline Graph load_graph(const std::string& path) {
  auto in = open_input(path);
  return io::read_edge_list(in);
}

}  // namespace detail

inline int run_generate(const GenerateOptions& options, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const Graph g = options.connected
                        ? connected_erdos_renyi_gnm(options.nodes, options.edges, options.seed)
                        : erdos_renyi_gnm(options.nodes, options.edges, RandomSource(options.seed, 0));
    detail::emit(options.out, out, [&](std::ostream& s) { io::write_edge_list(s, g); });
  });
}

inline int run_cluster(const ClusterOptions& options, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (!is_cluster_algo(options.algo)) {
      fail(ErrorCode::InvalidArgument, "unknown clustering algorithm \"" + options.algo + "\"");
    }
    const Graph g = detail::load_graph(options.graph);
    MembershipMap memberships;
    if (options.algo == "label-propagation") {
      LabelPropagation model({.seed = options.seed});
      if (options.max_iterations) model.max_iterations = *options.max_iterations;
      model.fit(g);
      memberships = model.get_memberships();
    } else if (options.algo == "scd") {
      Scd model;
      if (options.refinement_rounds) model.refinement_rounds = *options.refinement_rounds;
      model.fit(g);
      memberships = model.get_memberships();
    } else {
      SymNmf model({.seed = options.seed});
      if (options.dimensions) model.dimensions = *options.dimensions;
      if (options.iterations) model.iterations = *options.iterations;
      model.fit(g);
      memberships = model.get_memberships();
    }
    detail::emit(options.out, out, [&](std::ostream& s) { io::write_memberships(s, memberships); });
  });
}

inline int run_embed_nodes(const EmbedNodesOptions& options, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (!is_node_embedding_algo(options.algo)) {
      fail(ErrorCode::InvalidArgument, "unknown node embedding algorithm \"" + options.algo + "\"");
    }
    const Graph g = detail::load_graph(options.graph);
    EmbeddingMatrix embedding;
    if (options.algo == "deepwalk") {
      DeepWalk model({.seed = options.seed, .threads = options.threads});
      if (options.dimensions) model.dimensions = *options.dimensions;
      if (options.walk_number) model.walk_number = *options.walk_number;
      if (options.walk_length) model.walk_length = *options.walk_length;
      if (options.window_size) model.window_size = *options.window_size;
      if (options.negative_samples) model.negative_samples = *options.negative_samples;
      if (options.epochs) model.epochs = *options.epochs;
      if (options.learning_rate) model.learning_rate = *options.learning_rate;
      embedding = fit_embedding(model, g);
    } else if (options.algo == "walklets") {
      Walklets model({.seed = options.seed, .threads = options.threads});
      if (options.dimensions) model.dimensions = *options.dimensions;
      if (options.walk_number) model.walk_number = *options.walk_number;
      if (options.walk_length) model.walk_length = *options.walk_length;
      if (options.window_size) model.window_size = *options.window_size;
      if (options.negative_samples) model.negative_samples = *options.negative_samples;
      if (options.epochs) model.epochs = *options.epochs;
      if (options.learning_rate) model.learning_rate = *options.learning_rate;
      embedding = fit_embedding(model, g);
    } else {
      NetMf model({.seed = options.seed});
      if (options.dimensions) model.dimensions = *options.dimensions;
      if (options.order) model.order = *options.order;
      if (options.negatives) model.negatives = *options.negatives;
      embedding = fit_embedding(model, g);
    }
    detail::emit(options.out, out, [&](std::ostream& s) { io::write_embedding(s, embedding); });
  });
}

inline int run_embed_graphs(const EmbedGraphsOptions& options, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (options.algo != "sf" && options.algo != "netlsd" && options.algo != "wl-svd") {
      fail(ErrorCode::InvalidArgument, "unknown graph embedding algorithm \"" + options.algo + "\"");
    }
    auto in = detail::open_input(options.corpus);
    const GraphCorpus corpus = io::read_corpus(in);
    EmbeddingMatrix embedding;
    if (options.algo == "sf") {
      Sf model;
      if (options.dimensions) model.dimensions = *options.dimensions;
      model.fit(corpus);
      embedding = model.get_embedding();
    } else if (options.algo == "netlsd") {
      NetLsd model;
      model.fit(corpus);
      embedding = model.get_embedding();
    } else {
      WlSvd model({.seed = options.seed});
      if (options.dimensions) model.dimensions = *options.dimensions;
      if (options.wl_iterations) model.wl_iterations = *options.wl_iterations;
      model.fit(corpus);
      embedding = model.get_embedding();
    }
    detail::emit(options.out, out, [&](std::ostream& s) { io::write_embedding(s, embedding); });
  });
}

inline int run_eval_nmi(const EvalNmiOptions& options, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    auto first_in = detail::open_input(options.first);
    auto second_in = detail::open_input(options.second);
    const auto first = io::read_memberships(first_in);
    const auto second = io::read_memberships(second_in);
    out << io::format_double(nmi(first, second)) << '\n';
  });
}

inline int run_eval_modularity(const EvalModularityOptions& options, std::ostream& out,
                               std::ostream& err) {
  return detail::guarded(err, [&] {
    const Graph g = detail::load_graph(options.graph);
    auto in = detail::open_input(options.memberships);
    const auto labels = io::read_memberships(in);
    if (labels.size() != g.node_count()) {
      fail(ErrorCode::LengthMismatch, "membership covers " + std::to_string(labels.size()) +
                                          " nodes but the graph has " +
                                          std::to_string(g.node_count()));
    }
    out << io::format_double(modularity(g, MembershipMap::from_labels(labels))) << '\n';
  });
}

inline int run_eval_classify(const EvalClassifyOptions& options, std::ostream& out,
                             std::ostream& err) {
  return detail::guarded(err, [&] {
    auto embedding_in = detail::open_input(options.embedding);
    auto labels_in = detail::open_input(options.labels);
    const EmbeddingMatrix x = io::read_embedding(embedding_in);
    const auto labels = io::read_labels(labels_in);
    out << io::format_double(classification_auc(x, labels, options.ratio, options.seed)) << '\n';
  });
}

inline int run_bench_command(const BenchCommandOptions& options, std::ostream& out,
                             std::ostream& err) {
  return detail::guarded(err, [&] {
    const BenchResult result = run_bench(options.bench);
    detail::emit(options.out, out,
                 [&](std::ostream& s) { write_bench_csv(s, result, options.bench.repeats); });
  });
}

}  // namespace graphmine::cli
