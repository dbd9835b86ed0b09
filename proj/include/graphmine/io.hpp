#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "graphmine/community.hpp"
#include "graphmine/dense_matrix.hpp"
#include "graphmine/error.hpp"
#include "graphmine/graph.hpp"
#include "graphmine/graph_embedding.hpp"

namespace graphmine::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

[[noreturn]] inline void parse_error(std::size_t line, const std::string& what) {
  fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

// Parses "# nodes=N" (whitespace tolerant); false for any other comment.
inline bool parse_node_header(std::string_view line, std::int64_t& nodes) {
  line.remove_prefix(1);
  line = trim(line);
  constexpr std::string_view key = "nodes";
  if (line.substr(0, key.size()) != key) return false;
  line = trim(line.substr(key.size()));
  if (line.empty() || line.front() != '=') return false;
  return parse_number(line.substr(1), nodes);
}

}  // namespace detail

/// 17 significant digits: enough to round-trip any double.
inline std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

// ---------------------------------------------------------------------------
// Edge list: "u,v" per line, '#' comments, optional "# nodes=N" header.

inline Graph read_edge_list(std::istream& in) {
  std::vector<EdgeInput> edges;
  std::int64_t declared = -1;
  std::int64_t max_id = -1;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view text = detail::trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      std::int64_t nodes = 0;
      if (detail::parse_node_header(text, nodes)) declared = nodes;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) detail::parse_error(number, "expected \"u,v\"");
    std::int64_t u = 0;
    std::int64_t v = 0;
    if (!detail::parse_number(text.substr(0, comma), u) ||
        !detail::parse_number(text.substr(comma + 1), v)) {
      detail::parse_error(number, "endpoints must be base-10 integers");
    }
    edges.emplace_back(u, v);
    max_id = std::max({max_id, u, v});
  }
  const std::int64_t n = declared >= 0 ? declared : max_id + 1;
  if (n < 1) fail(ErrorCode::ParseError, "edge list defines no nodes");
  return build_graph(n, edges);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# nodes=" << g.node_count() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ',' << v << '\n';
}

// ---------------------------------------------------------------------------
// Membership JSON: {"0": 0, "1": 0, ...}

inline void write_memberships(std::ostream& out, const MembershipMap& memberships) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (std::size_t v = 0; v < memberships.size(); ++v) doc[std::to_string(v)] = memberships[v];
  out << doc.dump() << '\n';
}

/// Cluster ids indexed by node; keys must be exactly "0".."n-1".
inline std::vector<std::int64_t> read_memberships(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("membership JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::ParseError, "membership JSON must be an object");
  std::vector<std::int64_t> labels(doc.size());
  std::vector<char> seen(doc.size(), 0);
  for (const auto& [key, value] : doc.items()) {
    std::int64_t node = -1;
    if (!detail::parse_number(key, node) || node < 0 ||
        static_cast<std::size_t>(node) >= labels.size() || seen[static_cast<std::size_t>(node)]) {
      fail(ErrorCode::ParseError, "membership keys must be node ids 0..n-1, got \"" + key + "\"");
    }
    if (!value.is_number_integer()) {
      fail(ErrorCode::ParseError, "membership of node " + key + " is not an integer");
    }
    labels[static_cast<std::size_t>(node)] = value.get<std::int64_t>();
    seen[static_cast<std::size_t>(node)] = 1;
  }
  return labels;
}

// ---------------------------------------------------------------------------
// Embedding CSV: no header, row i = entity i.

inline void write_embedding(std::ostream& out, const EmbeddingMatrix& embedding) {
  for (std::size_t r = 0; r < embedding.rows(); ++r) {
    const auto row = embedding.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << ',';
      out << format_double(row[c]);
    }
    out << '\n';
  }
}

inline EmbeddingMatrix read_embedding(std::istream& in) {
  std::vector<double> values;
  std::size_t width = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view text = detail::trim(line);
    if (text.empty()) continue;
    std::size_t fields = 0;
    while (true) {
      const auto comma = text.find(',');
      double value = 0.0;
      if (!detail::parse_number(text.substr(0, comma), value)) {
        detail::parse_error(number, "embedding entries must be decimal floats");
      }
      values.push_back(value);
      ++fields;
      if (comma == std::string_view::npos) break;
      text.remove_prefix(comma + 1);
    }
    if (rows == 0) width = fields;
    if (fields != width) {
      detail::parse_error(number, "row has " + std::to_string(fields) + " columns, expected " +
                                      std::to_string(width));
    }
    ++rows;
  }
  return EmbeddingMatrix(rows, width, std::move(values));
}

// ---------------------------------------------------------------------------
// Labels CSV: one integer per line.

inline std::vector<std::int64_t> read_labels(std::istream& in) {
  std::vector<std::int64_t> labels;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view text = detail::trim(line);
    if (text.empty()) continue;
    std::int64_t value = 0;
    if (!detail::parse_number(text, value)) detail::parse_error(number, "label must be an integer");
    labels.push_back(value);
  }
  return labels;
}

inline void write_labels(std::ostream& out, std::span<const std::int64_t> labels) {
  for (std::int64_t label : labels) out << label << '\n';
}

// ---------------------------------------------------------------------------
// Corpus JSONL: {"edges": [[0,1],...], "features": {"0": "a"}, "label": 1}

inline GraphCorpus read_corpus(std::istream& in) {
  GraphCorpus corpus;
  std::vector<std::int64_t> labels;
  std::size_t labelled = 0;
  bool any_features = false;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (detail::trim(line).empty()) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      detail::parse_error(number, "not valid JSON");
    }
    if (!doc.is_object()) detail::parse_error(number, "expected a JSON object");
    if (!doc.contains("edges")) detail::parse_error(number, "missing \"edges\"");
    const auto& edge_list = doc["edges"];
    if (!edge_list.is_array() || edge_list.empty()) {
      detail::parse_error(number, "\"edges\" must be a non-empty array of [u, v] pairs");
    }
    std::vector<EdgeInput> edges;
    std::int64_t max_id = -1;
    for (const auto& pair : edge_list) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
          !pair[1].is_number_integer()) {
        detail::parse_error(number, "each edge must be a pair of integers");
      }
      const auto u = pair[0].get<std::int64_t>();
      const auto v = pair[1].get<std::int64_t>();
      edges.emplace_back(u, v);
      max_id = std::max({max_id, u, v});
    }
    try {
      corpus.graphs.push_back(build_graph(max_id + 1, edges));
    } catch (const Error& e) {
      detail::parse_error(number, e.what());
    }

    std::optional<NodeFeatures> features;
    if (doc.contains("features")) {
      const auto& map = doc["features"];
      if (!map.is_object()) detail::parse_error(number, "\"features\" must be an object");
      features.emplace();
      for (const auto& [key, value] : map.items()) {
        std::int64_t node = -1;
        if (!detail::parse_number(key, node) || node < 0 || node > max_id) {
          detail::parse_error(number, "feature key \"" + key + "\" is not a node id");
        }
        if (!value.is_string()) detail::parse_error(number, "features must be strings");
        (*features)[static_cast<NodeId>(node)] = value.get<std::string>();
      }
      if (features->size() != static_cast<std::size_t>(max_id + 1)) {
        detail::parse_error(number, "\"features\" must cover every node");
      }
      any_features = true;
    }
    corpus.features.push_back(std::move(features));

    if (doc.contains("label")) {
      if (!doc["label"].is_number_integer()) detail::parse_error(number, "\"label\" must be an integer");
      labels.push_back(doc["label"].get<std::int64_t>());
      ++labelled;
    } else {
      labels.push_back(0);
    }
  }
  if (corpus.graphs.empty()) fail(ErrorCode::EmptyCorpus, "corpus has no graphs");
  if (labelled != 0 && labelled != corpus.graphs.size()) {
    fail(ErrorCode::ParseError, "either every corpus line carries a label or none does");
  }
  if (labelled != 0) corpus.labels = std::move(labels);
  if (!any_features) corpus.features.clear();
  return corpus;
}

inline void write_corpus_line(std::ostream& out, const Graph& g, const NodeFeatures* features,
                              std::optional<std::int64_t> label) {
  nlohmann::ordered_json doc;
  doc["edges"] = nlohmann::ordered_json::array();
  for (const auto& [u, v] : g.edges()) doc["edges"].push_back({u, v});
  if (features != nullptr) {
    nlohmann::ordered_json map = nlohmann::ordered_json::object();
    for (const auto& [node, value] : *features) map[std::to_string(node)] = value;
    doc["features"] = std::move(map);
  }
  if (label) doc["label"] = *label;
  out << doc.dump() << '\n';
}

}  // namespace graphmine::io
