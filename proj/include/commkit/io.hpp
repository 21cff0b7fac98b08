#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "commkit/divisive.hpp"
#include "commkit/error.hpp"
#include "commkit/evaluation.hpp"
#include "commkit/graph.hpp"
#include "commkit/partition.hpp"

namespace commkit {

struct ParseDiagnostics {
  std::size_t dropped_self_loops = 0;
  std::size_t dropped_duplicate_edges = 0;
  std::size_t discarded_weights = 0;
  std::size_t symmetrized_arcs = 0;
  std::optional<std::size_t> line_of_first_error;
  std::vector<std::string> warnings;
};

struct ParseResult {
  Graph graph;
  ParseDiagnostics diagnostics;
  /// Per-node `value` attribute (GML) when present; used as ground truth.
  std::vector<std::optional<std::string>> node_values;
  /// Human-readable names (GML `label`, Pajek quoted label) when present.
  std::vector<std::optional<std::string>> display_names;
};

enum class GraphFormat { EdgeList, Gml, Pajek };

namespace detail {

/// Interns labels in first-seen order and collapses duplicate edges and
/// self-loops into diagnostic counts.
class GraphBuilder {
public:
  NodeId node(std::string_view label) {
    auto [it, inserted] = index_.emplace(std::string(label), static_cast<NodeId>(labels_.size()));
    if (inserted) {
      labels_.emplace_back(label);
      values_.emplace_back();
      names_.emplace_back();
    }
    return it->second;
  }

  std::optional<NodeId> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool knows(std::string_view label) const { return index_.count(std::string(label)) != 0; }

  void set_value(NodeId u, std::string v) { values_[u] = std::move(v); }
  void set_name(NodeId u, std::string v) { names_[u] = std::move(v); }

  void edge(NodeId u, NodeId v) {
    if (u == v) {
      ++diag_.dropped_self_loops;
      return;
    }
    const Edge e = make_edge(u, v);
    const std::uint64_t key = (std::uint64_t{e.u} << 32) | e.v;
    if (!seen_.insert(key).second) {
      ++diag_.dropped_duplicate_edges;
      return;
    }
    edges_.push_back(e);
  }

  ParseDiagnostics& diagnostics() { return diag_; }

  ParseResult build() {
    if (diag_.dropped_self_loops)
      diag_.warnings.push_back("dropped " + std::to_string(diag_.dropped_self_loops) + " self-loop(s)");
    if (diag_.dropped_duplicate_edges)
      diag_.warnings.push_back("dropped " + std::to_string(diag_.dropped_duplicate_edges) +
                               " duplicate edge(s)");
    ParseResult out{Graph(labels_.size(), edges_, labels_), std::move(diag_), std::move(values_),
                    std::move(names_)};
    return out;
  }

private:
  std::vector<std::string> labels_;
  std::vector<std::optional<std::string>> values_;
  std::vector<std::optional<std::string>> names_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<Edge> edges_;
  std::unordered_set<std::uint64_t> seen_;
  ParseDiagnostics diag_;
};

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

/// Splits text into lines, accepting LF and CRLF endings.
inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::optional<long long> to_integer(std::string_view s) {
  long long v = 0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::string lower(std::string_view s) {
  std::string out;
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

// ---- GML -----------------------------------------------------------------

struct GmlNode;
using GmlList = std::vector<std::pair<std::string, GmlNode>>;

struct GmlNode {
  std::size_t line = 0;
  bool is_string = false;
  std::string scalar; // number text or string contents
  std::shared_ptr<GmlList> list;
};

class GmlReader {
public:
  explicit GmlReader(std::string_view text) : text_(text) {}

  GmlList parse_document() {
    GmlList top = parse_list(0);
    skip();
    if (pos_ < text_.size()) fail("unexpected ']' without matching '['");
    return top;
  }

private:
  static constexpr int max_depth = 64;

  [[noreturn]] void fail(const std::string& msg) const { throw Error(ErrorCode::FormatError, msg, line_); }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (is_space(c)) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  GmlList parse_list(int depth) {
    if (depth > max_depth) fail("nesting deeper than " + std::to_string(max_depth) + " levels");
    GmlList out;
    while (true) {
      skip();
      if (pos_ >= text_.size()) {
        if (depth > 0) fail("unbalanced brackets: missing ']'");
        return out;
      }
      if (text_[pos_] == ']') {
        if (depth == 0) return out; // caller reports the stray bracket
        ++pos_;
        return out;
      }
      std::string key = parse_key();
      skip();
      if (pos_ >= text_.size()) fail("key '" + key + "' has no value");
      out.emplace_back(std::move(key), parse_value(depth));
    }
  }

  std::string parse_key() {
    const char c = text_[pos_];
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) {
      fail(std::string("expected a key, found '") + c + "'");
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  GmlNode parse_value(int depth) {
    GmlNode node;
    node.line = line_;
    const char c = text_[pos_];
    if (c == '[') {
      ++pos_;
      node.list = std::make_shared<GmlList>(parse_list(depth + 1));
    } else if (c == '"') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\n') ++line_;
        ++pos_;
      }
      if (pos_ >= text_.size()) fail("unterminated string");
      node.is_string = true;
      node.scalar = std::string(text_.substr(start, pos_ - start));
      ++pos_;
    } else if (c == ']') {
      fail("missing value before ']'");
    } else {
      std::size_t start = pos_;
      while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != '[' && text_[pos_] != ']')
        ++pos_;
      node.scalar = std::string(text_.substr(start, pos_ - start));
    }
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

inline const GmlNode* gml_find(const GmlList& list, std::string_view key) {
  for (const auto& [k, v] : list)
    if (k == key) return &v;
  return nullptr;
}

// ---- CSV -----------------------------------------------------------------

inline std::vector<std::string> split_csv_row(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back().push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"' && fields.back().empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back().push_back(c);
    }
  }
  if (quoted) throw Error(ErrorCode::FormatError, "unterminated quoted CSV field", line_no);
  return fields;
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

/// Orders numeric labels numerically, before any non-numeric label, and
/// the rest lexicographically.
inline bool label_less(const std::string& a, const std::string& b) {
  auto ia = to_integer(a);
  auto ib = to_integer(b);
  if (ia && ib) return *ia != *ib ? *ia < *ib : a < b;
  if (ia != std::nullopt || ib != std::nullopt) return ia.has_value();
  return a < b;
}

} // namespace detail

/// Whitespace-separated "a b" pairs, one per line; `#` starts a comment line.
inline ParseResult parse_edge_list(std::string_view text) {
  detail::GraphBuilder b;
  auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = detail::trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    auto tok = detail::split_ws(line);
    if (tok.size() != 2)
      throw Error(ErrorCode::FormatError,
                  "expected two node labels, found " + std::to_string(tok.size()) + " token(s)", i + 1);
    NodeId u = b.node(tok[0]);
    NodeId v = b.node(tok[1]);
    b.edge(u, v);
  }
  return b.build();
}

/// Minimal GML reader: `graph [ node [ id .. ] edge [ source .. target .. ] ]`.
/// Unknown keys are skipped; node labels in the resulting graph are the
/// GML ids, in declaration order.
inline ParseResult parse_gml(std::string_view text) {
  detail::GmlReader reader(text);
  const detail::GmlList doc = reader.parse_document();
  const detail::GmlNode* graph = detail::gml_find(doc, "graph");
  if (!graph || !graph->list) throw Error(ErrorCode::FormatError, "no 'graph [ ... ]' block");

  detail::GraphBuilder b;
  for (const auto& [key, value] : *graph->list) {
    if (key == "directed" && !value.list && value.scalar != "0")
      throw Error(ErrorCode::UnsupportedFormat, "directed graphs are not supported", value.line);
  }
  for (const auto& [key, value] : *graph->list) {
    if (key != "node") continue;
    if (!value.list) throw Error(ErrorCode::FormatError, "node entry is not a list", value.line);
    const detail::GmlNode* id = detail::gml_find(*value.list, "id");
    if (!id || id->list) throw Error(ErrorCode::FormatError, "node without scalar id", value.line);
    if (b.knows(id->scalar)) throw Error(ErrorCode::FormatError, "duplicate node id " + id->scalar, id->line);
    NodeId u = b.node(id->scalar);
    if (const auto* label = detail::gml_find(*value.list, "label"); label && !label->list)
      b.set_name(u, label->scalar);
    if (const auto* val = detail::gml_find(*value.list, "value"); val && !val->list)
      b.set_value(u, val->scalar);
  }
  for (const auto& [key, value] : *graph->list) {
    if (key != "edge") continue;
    if (!value.list) throw Error(ErrorCode::FormatError, "edge entry is not a list", value.line);
    const detail::GmlNode* src = detail::gml_find(*value.list, "source");
    const detail::GmlNode* dst = detail::gml_find(*value.list, "target");
    if (!src || !dst || src->list || dst->list)
      throw Error(ErrorCode::FormatError, "edge needs scalar source and target", value.line);
    auto u = b.find(src->scalar);
    auto v = b.find(dst->scalar);
    if (!u) throw Error(ErrorCode::FormatError, "edge source " + src->scalar + " is not a declared node", src->line);
    if (!v) throw Error(ErrorCode::FormatError, "edge target " + dst->scalar + " is not a declared node", dst->line);
    b.edge(*u, *v);
  }
  return b.build();
}

/// Pajek `.net`: `*Vertices N`, optional vertex lines `id "label"`, then
/// `*Edges`/`*Arcs` (or their `list` forms). Arcs are symmetrised and edge
/// weights dropped, each with a warning. Node labels are the vertex numbers.
inline ParseResult parse_pajek(std::string_view text) {
  detail::GraphBuilder b;
  auto lines = detail::split_lines(text);
  enum class Section { None, Vertices, Edges, Arcs, EdgesList, ArcsList } section = Section::None;
  long long n = -1;

  auto vertex = [&](std::string_view tok, std::size_t line_no) -> NodeId {
    auto id = detail::to_integer(tok);
    if (!id) throw Error(ErrorCode::FormatError, "vertex id '" + std::string(tok) + "' is not an integer", line_no);
    if (*id < 1 || *id > n)
      throw Error(ErrorCode::FormatError, "vertex id " + std::to_string(*id) + " outside 1.." + std::to_string(n), line_no);
    return static_cast<NodeId>(*id - 1);
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::string_view line = detail::trim(lines[i]);
    if (line.empty() || line.front() == '%') continue;
    if (line.front() == '*') {
      auto tok = detail::split_ws(line);
      const std::string head = detail::lower(tok[0]);
      if (head == "*network") continue;
      if (head == "*vertices") {
        if (n >= 0) throw Error(ErrorCode::FormatError, "second *Vertices header", line_no);
        if (tok.size() < 2) throw Error(ErrorCode::FormatError, "*Vertices without a count", line_no);
        auto count = detail::to_integer(tok[1]);
        if (!count || *count < 0 || *count > 50'000'000)
          throw Error(ErrorCode::FormatError, "invalid vertex count", line_no);
        n = *count;
        for (long long v = 1; v <= n; ++v) b.node(std::to_string(v));
        section = Section::Vertices;
        continue;
      }
      if (n < 0) throw Error(ErrorCode::FormatError, "missing *Vertices header", line_no);
      if (head == "*edges") section = Section::Edges;
      else if (head == "*arcs") section = Section::Arcs;
      else if (head == "*edgeslist") section = Section::EdgesList;
      else if (head == "*arcslist") section = Section::ArcsList;
      else throw Error(ErrorCode::UnsupportedFormat, "unsupported Pajek section " + std::string(tok[0]), line_no);
      if ((section == Section::Arcs || section == Section::ArcsList) &&
          std::find(b.diagnostics().warnings.begin(), b.diagnostics().warnings.end(),
                    "arcs symmetrised to undirected edges") == b.diagnostics().warnings.end())
        b.diagnostics().warnings.push_back("arcs symmetrised to undirected edges");
      continue;
    }
    switch (section) {
    case Section::None: throw Error(ErrorCode::FormatError, "missing *Vertices header", line_no);
    case Section::Vertices: {
      auto tok = detail::split_ws(line);
      NodeId u = vertex(tok[0], line_no);
      std::string_view rest = detail::trim(line.substr(tok[0].size()));
      if (!rest.empty() && rest.front() == '"') {
        auto close = rest.find('"', 1);
        if (close == std::string_view::npos) throw Error(ErrorCode::FormatError, "unterminated vertex label", line_no);
        b.set_name(u, std::string(rest.substr(1, close - 1)));
      } else if (!rest.empty()) {
        b.set_name(u, std::string(detail::split_ws(rest).front()));
      }
      break;
    }
    case Section::Edges:
    case Section::Arcs: {
      auto tok = detail::split_ws(line);
      if (tok.size() < 2) throw Error(ErrorCode::FormatError, "edge line needs two vertex ids", line_no);
      NodeId u = vertex(tok[0], line_no);
      NodeId v = vertex(tok[1], line_no);
      if (tok.size() > 2) {
        if (b.diagnostics().discarded_weights++ == 0) b.diagnostics().warnings.push_back("edge weights discarded");
      }
      if (section == Section::Arcs) ++b.diagnostics().symmetrized_arcs;
      b.edge(u, v);
      break;
    }
    case Section::EdgesList:
    case Section::ArcsList: {
      auto tok = detail::split_ws(line);
      NodeId u = vertex(tok[0], line_no);
      for (std::size_t t = 1; t < tok.size(); ++t) {
        if (section == Section::ArcsList) ++b.diagnostics().symmetrized_arcs;
        b.edge(u, vertex(tok[t], line_no));
      }
      break;
    }
    }
  }
  if (n < 0) throw Error(ErrorCode::FormatError, "missing *Vertices header", lines.size());
  return b.build();
}

inline ParseResult parse_graph(std::string_view text, GraphFormat format) {
  switch (format) {
  case GraphFormat::EdgeList: return parse_edge_list(text);
  case GraphFormat::Gml: return parse_gml(text);
  case GraphFormat::Pajek: return parse_pajek(text);
  }
  throw Error(ErrorCode::UnsupportedFormat, "unknown format");
}

inline std::optional<GraphFormat> parse_format_name(std::string_view name) {
  const std::string s = detail::lower(name);
  if (s == "edgelist" || s == "edge-list" || s == "edges" || s == "txt") return GraphFormat::EdgeList;
  if (s == "gml") return GraphFormat::Gml;
  if (s == "pajek" || s == "net") return GraphFormat::Pajek;
  return std::nullopt;
}

/// .gml → GML, .net/.paj → Pajek, anything else → edge list.
inline GraphFormat format_from_path(const std::filesystem::path& path) {
  const std::string ext = detail::lower(path.extension().string());
  if (ext == ".gml") return GraphFormat::Gml;
  if (ext == ".net" || ext == ".paj") return GraphFormat::Pajek;
  return GraphFormat::EdgeList;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::DatasetMissing, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ParseResult read_graph_file(const std::filesystem::path& path,
                                   std::optional<GraphFormat> format = std::nullopt) {
  return parse_graph(read_file(path), format.value_or(format_from_path(path)));
}

// ---- writers ---------------------------------------------------------------

/// Round-trip formatting for doubles (17 significant digits).
inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Fixed-point formatting for reports.
inline std::string format_fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1); // no "-0.000"
  return s;
}

inline std::string write_edge_list(const Graph& g) {
  std::string out;
  for (Edge e : g.edges()) out += g.label(e.u) + " " + g.label(e.v) + "\n";
  return out;
}

/// CSV `node,community`, rows sorted by node label.
inline std::string write_partition(const Partition& p, std::span<const std::string> labels) {
  if (p.node_count() != labels.size())
    throw Error(ErrorCode::PartitionMismatch, "label table does not match partition size");
  std::vector<NodeId> order(labels.size());
  for (NodeId i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return detail::label_less(labels[a], labels[b]); });
  std::string out = "node,community\n";
  for (NodeId u : order) out += detail::csv_field(labels[u]) + "," + std::to_string(p.community_of(u)) + "\n";
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> comments; // '#' lines, without the marker
};

/// Strict CSV reader: the first non-comment line must equal `header`
/// and every row must have the same field count.
inline CsvTable read_csv(std::string_view text, const std::vector<std::string>& header) {
  CsvTable t;
  auto lines = detail::split_lines(text);
  bool have_header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (line.empty()) {
      if (i + 1 == lines.size()) continue; // trailing newline
      throw Error(ErrorCode::FormatError, "blank line in CSV", i + 1);
    }
    if (line.front() == '#') {
      t.comments.emplace_back(detail::trim(line.substr(1)));
      continue;
    }
    auto fields = detail::split_csv_row(line, i + 1);
    if (!have_header) {
      if (fields != header) throw Error(ErrorCode::FormatError, "unexpected CSV header '" + std::string(line) + "'", i + 1);
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != header.size())
      throw Error(ErrorCode::FormatError, "expected " + std::to_string(header.size()) + " fields", i + 1);
    t.rows.push_back(std::move(fields));
  }
  if (!have_header) throw Error(ErrorCode::FormatError, "missing CSV header");
  return t;
}

/// Reads a `node,community` CSV against `g`'s label table. Every node must
/// appear exactly once.
inline Partition read_partition(std::string_view text, const Graph& g) {
  const CsvTable t = read_csv(text, {"node", "community"});
  std::vector<std::optional<std::size_t>> raw(g.node_count());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    auto u = g.find_node(t.rows[r][0]);
    if (!u) throw Error(ErrorCode::PartitionMismatch, "node '" + t.rows[r][0] + "' is not in the graph");
    auto c = detail::to_integer(t.rows[r][1]);
    if (!c || *c < 0) throw Error(ErrorCode::FormatError, "invalid community id '" + t.rows[r][1] + "'", r + 2);
    if (raw[*u]) throw Error(ErrorCode::PartitionMismatch, "node '" + t.rows[r][0] + "' listed twice");
    raw[*u] = static_cast<std::size_t>(*c);
  }
  std::vector<std::size_t> ids(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!raw[i]) throw Error(ErrorCode::PartitionMismatch, "node '" + g.label(static_cast<NodeId>(i)) + "' missing from partition");
    ids[i] = *raw[i];
  }
  return Partition(ids);
}

struct DendrogramRecord {
  std::size_t step = 0;
  std::string source;
  std::string target;
  double score = 0.0;
  std::size_t components_after = 0;

  friend bool operator==(const DendrogramRecord&, const DendrogramRecord&) = default;
};

/// JSON array of `{step, edge: [label, label], score, components_after}`.
inline std::string write_dendrogram(const Dendrogram& d) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  const Graph& g = *d.base;
  for (std::size_t i = 0; i < d.removals.size(); ++i) {
    const Removal& r = d.removals[i];
    nlohmann::ordered_json rec;
    rec["step"] = i + 1;
    rec["edge"] = {g.label(r.edge.u), g.label(r.edge.v)};
    rec["score"] = r.score;
    rec["components_after"] = r.components_after;
    arr.push_back(std::move(rec));
  }
  return arr.dump(2) + "\n";
}

/// Parses and validates a dendrogram file: steps count 1, 2, ...;
/// components_after never decreases and grows by at most one per step.
inline std::vector<DendrogramRecord> read_dendrogram(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("dendrogram JSON: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::FormatError, "dendrogram must be a JSON array");
  std::vector<DendrogramRecord> out;
  try {
    for (const auto& rec : doc) {
      DendrogramRecord r;
      r.step = rec.at("step").get<std::size_t>();
      const auto& edge = rec.at("edge");
      if (!edge.is_array() || edge.size() != 2) throw Error(ErrorCode::FormatError, "edge must be a pair of labels");
      r.source = edge[0].get<std::string>();
      r.target = edge[1].get<std::string>();
      r.score = rec.at("score").get<double>();
      r.components_after = rec.at("components_after").get<std::size_t>();
      if (r.step != out.size() + 1) throw Error(ErrorCode::FormatError, "steps must increase by one");
      if (!out.empty() && (r.components_after < out.back().components_after ||
                           r.components_after > out.back().components_after + 1))
        throw Error(ErrorCode::FormatError, "components_after must grow by 0 or 1 per step");
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("dendrogram record: ") + e.what());
  }
  return out;
}

/// Rebuilds a Dendrogram over `g` from parsed records.
inline Dendrogram dendrogram_from_records(const Graph& g, const std::vector<DendrogramRecord>& records) {
  Dendrogram d;
  d.base = std::make_shared<const Graph>(g);
  d.initial_components = connected_components(g).count;
  for (const auto& r : records) {
    auto u = g.find_node(r.source);
    auto v = g.find_node(r.target);
    if (!u || !v || !g.has_edge(*u, *v))
      throw Error(ErrorCode::EdgeNotFound, "dendrogram edge (" + r.source + ", " + r.target + ") is not in the graph");
    d.removals.push_back({make_edge(*u, *v), r.score, r.components_after});
  }
  return d;
}

/// CSV `k,modularity`.
inline std::string write_curve(const ModularityCurve& curve) {
  std::string out = "k,modularity\n";
  for (const auto& pt : curve.points) out += std::to_string(pt.k) + "," + format_real(pt.q) + "\n";
  return out;
}

} // namespace commkit
