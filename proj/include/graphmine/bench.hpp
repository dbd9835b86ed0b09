#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "graphmine/community.hpp"
#include "graphmine/error.hpp"
#include "graphmine/graph.hpp"
#include "graphmine/io.hpp"
#include "graphmine/node_embedding.hpp"

namespace graphmine {

struct BenchOptions {
  std::string task = "embed-nodes";  // "cluster" or "embed-nodes"
  std::string algo = "netmf";
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> degrees{10};  // mean degree; m = degree * n / 2
  std::size_t repeats = 3;
  std::uint64_t seed = 42;
  std::optional<std::size_t> dimensions;
  std::size_t threads = 1;
};

struct BenchRow {
  std::string algo;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t repeat = 0;
  double seconds = 0.0;
};

struct BenchResult {
  std::vector<BenchRow> runs;
  std::vector<BenchRow> means;  // one per (n, degree) configuration, in run order
};

inline bool is_cluster_algo(std::string_view algo) {
  return algo == "label-propagation" || algo == "scd" || algo == "symnmf";
}

inline bool is_node_embedding_algo(std::string_view algo) {
  return algo == "deepwalk" || algo == "walklets" || algo == "netmf";
}

/// Parses "1024,2048,4096": positive, strictly ascending.
inline std::vector<std::size_t> parse_size_list(std::string_view text) {
  std::vector<std::size_t> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::size_t value = 0;
    if (!io::detail::parse_number(text.substr(0, comma), value) || value == 0) {
      fail(ErrorCode::InvalidArgument, "invalid size list: \"" + std::string(text) + "\"");
    }
    if (!out.empty() && value <= out.back()) {
      fail(ErrorCode::InvalidArgument, "invalid size list: sizes must be strictly ascending");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    if (text.empty()) fail(ErrorCode::InvalidArgument, "invalid size list: trailing comma");
  }
  if (out.empty()) fail(ErrorCode::InvalidArgument, "invalid size list: empty");
  return out;
}

/// Fits `algo` once on `g` with default hyperparameters (plus overrides).
inline void bench_fit_once(const BenchOptions& options, const Graph& g) {
  const std::string& algo = options.algo;
  if (algo == "label-propagation") {
    LabelPropagation model({.seed = options.seed});
    model.fit(g);
  } else if (algo == "scd") {
    Scd model;
    model.fit(g);
  } else if (algo == "symnmf") {
    SymNmf model({.dimensions = options.dimensions.value_or(32), .seed = options.seed});
    model.fit(g);
  } else if (algo == "deepwalk") {
    DeepWalk model({.dimensions = options.dimensions.value_or(128), .seed = options.seed,
                    .threads = options.threads});
    model.fit(g);
  } else if (algo == "walklets") {
    Walklets model({.dimensions = options.dimensions.value_or(32), .seed = options.seed,
                    .threads = options.threads});
    model.fit(g);
  } else if (algo == "netmf") {
    NetMf model({.dimensions = options.dimensions.value_or(32), .seed = options.seed});
    model.fit(g);
  } else {
    fail(ErrorCode::InvalidArgument, "unknown algorithm \"" + algo + "\"");
  }
}

/// Wall-clock of fit only, on connected G(n, degree·n/2) samples. Graph
/// generation is excluded from the timing.
inline BenchResult run_bench(const BenchOptions& options) {
  if (options.task == "cluster") {
    if (!is_cluster_algo(options.algo)) {
      fail(ErrorCode::InvalidArgument, "\"" + options.algo + "\" is not a clustering algorithm");
    }
  } else if (options.task == "embed-nodes") {
    if (!is_node_embedding_algo(options.algo)) {
      fail(ErrorCode::InvalidArgument, "\"" + options.algo + "\" is not a node embedding algorithm");
    }
  } else {
    fail(ErrorCode::InvalidArgument, "unknown bench task \"" + options.task + "\"");
  }
  if (options.sizes.empty()) fail(ErrorCode::InvalidArgument, "invalid size list: empty");
  for (std::size_t i = 1; i < options.sizes.size(); ++i) {
    if (options.sizes[i] <= options.sizes[i - 1]) {
      fail(ErrorCode::InvalidArgument, "invalid size list: sizes must be strictly ascending");
    }
  }
  if (options.repeats < 1) fail(ErrorCode::InvalidArgument, "repeats must be positive");

  BenchResult result;
  std::uint64_t configuration = 0;
  for (std::size_t degree : options.degrees) {
    for (std::size_t n : options.sizes) {
      if ((degree * n) % 2 != 0) {
        fail(ErrorCode::InvalidArgument, "degree * n must be even to give an integral edge count");
      }
      const std::size_t m = degree * n / 2;
      const Graph g = connected_erdos_renyi_gnm(static_cast<std::int64_t>(n),
                                                static_cast<std::int64_t>(m), options.seed,
                                                configuration * 100);
      ++configuration;
      double total = 0.0;
      for (std::size_t r = 0; r < options.repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        bench_fit_once(options, g);
        const auto stop = std::chrono::steady_clock::now();
        const double seconds = std::chrono::duration<double>(stop - start).count();
        result.runs.push_back({options.algo, n, m, r, seconds});
        total += seconds;
      }
      result.means.push_back(
          {options.algo, n, m, options.repeats, total / static_cast<double>(options.repeats)});
    }
  }
  return result;
}

/// CSV with header algo,n,m,repeat,seconds; each configuration's repeats are
/// followed by a row whose repeat column reads "mean".
inline void write_bench_csv(std::ostream& out, const BenchResult& result, std::size_t repeats) {
  out << "algo,n,m,repeat,seconds\n";
  for (std::size_t c = 0; c < result.means.size(); ++c) {
    for (std::size_t r = 0; r < repeats; ++r) {
      const BenchRow& row = result.runs[c * repeats + r];
      out << row.algo << ',' << row.nodes << ',' << row.edges << ',' << row.repeat << ','
          << io::format_double(row.seconds) << '\n';
    }
    const BenchRow& mean = result.means[c];
    out << mean.algo << ',' << mean.nodes << ',' << mean.edges << ",mean,"
        << io::format_double(mean.seconds) << '\n';
  }
}

}  // namespace graphmine
