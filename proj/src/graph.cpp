// Copyright 2026 The tempaug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tempaug/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

namespace tempaug {

bool SparseCsr::contains(std::size_t r, std::size_t c) const {
  auto cols = row(r);
  return std::binary_search(cols.begin(), cols.end(), c);
}

void SparseCsr::validate() const {
  if (row_offsets.size() != n_rows + 1) throw ValidationError("csr: row_offsets length != n_rows + 1");
  if (row_offsets.front() != 0 || row_offsets.back() != col_indices.size())
    throw ValidationError("csr: row_offsets do not span col_indices");
  if (!values.empty() && values.size() != col_indices.size())
    throw ValidationError("csr: values length != nnz");
  for (std::size_t r = 0; r < n_rows; ++r) {
    if (row_offsets[r] > row_offsets[r + 1]) throw ValidationError("csr: row_offsets decreasing");
    for (std::size_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
      if (col_indices[k] >= n_cols) throw ValidationError("csr: column index out of range");
      if (k > row_offsets[r] && col_indices[k] <= col_indices[k - 1])
        throw ValidationError("csr: columns not sorted/unique within row");
    }
  }
}

SparseCsr SparseCsr::from_pairs(std::size_t n_rows, std::size_t n_cols,
                                std::vector<std::pair<std::size_t, std::size_t>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  SparseCsr csr;
  csr.n_rows = n_rows;
  csr.n_cols = n_cols;
  csr.row_offsets.assign(n_rows + 1, 0);
  csr.col_indices.reserve(pairs.size());
  for (const auto& [r, c] : pairs) {
    if (r >= n_rows || c >= n_cols) throw ValidationError("csr: pair out of range");
    ++csr.row_offsets[r + 1];
    csr.col_indices.push_back(c);
  }
  for (std::size_t r = 0; r < n_rows; ++r) csr.row_offsets[r + 1] += csr.row_offsets[r];
  return csr;
}

Snapshot Snapshot::from_undirected(std::size_t n_nodes, std::span<const Edge> edges) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(2 * edges.size() + n_nodes);
  for (const auto& [u, v] : edges) {
    if (u >= n_nodes || v >= n_nodes) throw ValidationError("snapshot: edge endpoint out of range");
    if (u == v) continue;
    pairs.emplace_back(u, v);
    pairs.emplace_back(v, u);
  }
  Snapshot snap;
  snap.adjacency = SparseCsr::from_pairs(n_nodes, n_nodes, pairs);
  for (std::size_t v = 0; v < n_nodes; ++v) pairs.emplace_back(v, v);
  snap.adjacency_with_loops = SparseCsr::from_pairs(n_nodes, n_nodes, std::move(pairs));
  return snap;
}

FeatureMatrix FeatureMatrix::one_hot(std::size_t n_nodes, std::size_t n_steps) {
  FeatureMatrix f;
  f.mode = FeatureMode::OneHotNodeId;
  f.n_nodes = n_nodes;
  f.n_steps = n_steps;
  f.dim = n_nodes;
  return f;
}

FeatureMatrix FeatureMatrix::explicit_rows(std::size_t n_nodes, std::size_t n_steps, Matrix rows) {
  if (static_cast<std::size_t>(rows.rows()) != n_nodes * n_steps)
    throw ValidationError("features: expected one row per node-time");
  FeatureMatrix f;
  f.mode = FeatureMode::Explicit;
  f.n_nodes = n_nodes;
  f.n_steps = n_steps;
  f.dim = static_cast<std::size_t>(rows.cols());
  f.rows = std::move(rows);
  return f;
}

Eigen::VectorXd FeatureMatrix::row(std::size_t nt) const {
  if (mode == FeatureMode::Explicit) return rows.row(static_cast<Eigen::Index>(nt)).transpose();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  x[static_cast<Eigen::Index>(nt % n_nodes)] = 1.0;
  return x;
}

void SnapshotSequence::validate() const {
  if (snapshots.size() != n_steps) throw ValidationError("sequence: snapshot count != n_steps");
  for (const auto& s : snapshots) {
    if (s.adjacency.n_rows != n_nodes || s.adjacency.n_cols != n_nodes ||
        s.adjacency_with_loops.n_rows != n_nodes)
      throw ValidationError("sequence: snapshot node set size != n_nodes");
  }
  if (features.n_nodes != n_nodes || features.n_steps != n_steps)
    throw ValidationError("sequence: feature shape mismatch");
  if (labels.n_nodes != n_nodes || labels.n_steps != n_steps || labels.y.size() != n_nodes * n_steps)
    throw ValidationError("sequence: label shape mismatch");
  for (int y : labels.y) {
    if (y != LabelTensor::kMissing && (y < 0 || static_cast<std::size_t>(y) >= n_classes))
      throw ValidationError("sequence: label outside [0, n_classes)");
  }
}

SnapshotSequence make_sequence(std::size_t n_nodes, const std::vector<std::vector<Edge>>& edges_per_step,
                               LabelTensor labels, std::size_t n_classes) {
  SnapshotSequence seq;
  seq.n_nodes = n_nodes;
  seq.n_steps = edges_per_step.size();
  seq.n_classes = n_classes;
  seq.snapshots.reserve(seq.n_steps);
  for (const auto& edges : edges_per_step) seq.snapshots.push_back(Snapshot::from_undirected(n_nodes, edges));
  seq.features = FeatureMatrix::one_hot(n_nodes, seq.n_steps);
  if (labels.y.empty()) labels = LabelTensor(n_nodes, seq.n_steps);
  seq.labels = std::move(labels);
  seq.validate();
  return seq;
}

SplitSpec SplitSpec::parse(const std::string& text) {
  SplitSpec spec;
  char c1 = 0, c2 = 0;
  long a = -1, b = -1, c = -1;
  std::istringstream in(text);
  if (!(in >> a >> c1 >> b >> c2 >> c) || c1 != ',' || c2 != ',' || a < 0 || b < 0 || c < 0)
    throw ValidationError("split: expected 'train,val,test' counts, got '" + text + "'");
  spec.n_train = static_cast<std::size_t>(a);
  spec.n_val = static_cast<std::size_t>(b);
  spec.n_test = static_cast<std::size_t>(c);
  return spec;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string field;
  while (in >> field) out.push_back(field);
  return out;
}

bool skip_line(const std::string& line) {
  auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

double parse_real(const std::string& s, const std::string& where) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(v))
    throw ValidationError(where + ": malformed number '" + s + "'");
  return v;
}

long parse_int(const std::string& s, const std::string& where) {
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') throw ValidationError(where + ": malformed integer '" + s + "'");
  return v;
}

struct NodeIndex {
  std::unordered_map<std::string, NodeId> dense;
  std::vector<std::string> original;

  NodeId intern(const std::string& id) {
    auto [it, inserted] = dense.try_emplace(id, original.size());
    if (inserted) original.push_back(id);
    return it->second;
  }
};

}  // namespace

SnapshotSequence load_edge_stream(const std::filesystem::path& edges_path,
                                  const std::filesystem::path& labels_path, std::size_t n_steps,
                                  Warnings* warnings) {
  if (n_steps == 0) throw ValidationError("load: n_steps must be >= 1");
  std::ifstream edges_in(edges_path);
  if (!edges_in) throw ValidationError("load: cannot open " + edges_path.string());

  struct RawEdge {
    NodeId u, v;
    double ts;
  };
  NodeIndex nodes;
  std::vector<RawEdge> raw;
  std::string line;
  std::size_t line_no = 0;
  bool dropped_loop = false;
  while (std::getline(edges_in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const std::string where = edges_path.filename().string() + ":" + std::to_string(line_no);
    auto fields = split_fields(line);
    if (fields.size() != 3) throw ValidationError(where + ": expected 3 columns 'u v timestamp'");
    const double ts = parse_real(fields[2], where);
    const NodeId u = nodes.intern(fields[0]);
    const NodeId v = nodes.intern(fields[1]);
    if (u == v) {
      dropped_loop = true;
      continue;
    }
    raw.push_back({u, v, ts});
  }
  if (raw.empty()) throw ValidationError("load: no edges in " + edges_path.string());
  if (dropped_loop) warn(warnings, "load: self-loop rows ignored");

  double min_ts = raw.front().ts, max_ts = raw.front().ts;
  for (const auto& e : raw) {
    min_ts = std::min(min_ts, e.ts);
    max_ts = std::max(max_ts, e.ts);
  }
  const double width = (max_ts - min_ts) / static_cast<double>(n_steps);
  auto step_of = [&](double ts) -> std::size_t {
    if (width <= 0.0 || ts <= min_ts) return 0;
    const double k = std::floor((ts - min_ts) / width);
    return std::min(n_steps - 1, static_cast<std::size_t>(k));
  };

  struct RawLabel {
    NodeId v;
    double ts;
    int cls;
  };
  std::vector<RawLabel> raw_labels;
  std::ifstream labels_in(labels_path);
  if (!labels_in) throw ValidationError("load: cannot open " + labels_path.string());
  line_no = 0;
  int max_class = -1;
  bool clamped = false;
  while (std::getline(labels_in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const std::string where = labels_path.filename().string() + ":" + std::to_string(line_no);
    auto fields = split_fields(line);
    if (fields.size() != 3) throw ValidationError(where + ": expected 3 columns 'v timestamp class'");
    const double ts = parse_real(fields[1], where);
    const long cls = parse_int(fields[2], where);
    if (cls < 0) throw ValidationError(where + ": negative class");
    if (ts < min_ts || ts > max_ts) clamped = true;
    raw_labels.push_back({nodes.intern(fields[0]), ts, static_cast<int>(cls)});
    max_class = std::max(max_class, static_cast<int>(cls));
  }
  if (clamped) warn(warnings, "load: label timestamps outside the edge time range were clamped");

  const std::size_t n = nodes.original.size();
  std::vector<std::vector<Edge>> per_step(n_steps);
  for (const auto& e : raw) per_step[step_of(e.ts)].emplace_back(e.u, e.v);

  LabelTensor labels(n, n_steps);
  std::vector<double> label_ts(n * n_steps, -std::numeric_limits<double>::infinity());
  for (const auto& l : raw_labels) {
    const std::size_t t = step_of(std::clamp(l.ts, min_ts, max_ts));
    const std::size_t k = node_time(n, l.v, t);
    // Latest timestamp wins; file order breaks ties.
    if (l.ts >= label_ts[k]) {
      label_ts[k] = l.ts;
      labels.y[k] = l.cls;
    }
  }

  const auto non_empty = std::count_if(per_step.begin(), per_step.end(), [](const auto& s) { return !s.empty(); });
  if (static_cast<std::size_t>(non_empty) < n_steps)
    warn(warnings, "load: only " + std::to_string(non_empty) + " of " + std::to_string(n_steps) +
                       " intervals contain edges");

  SnapshotSequence seq = make_sequence(n, per_step, std::move(labels), static_cast<std::size_t>(max_class + 1));
  seq.node_ids = std::move(nodes.original);
  return seq;
}

void write_node_map(const SnapshotSequence& seq, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# original_id\tdense_id\n";
  for (std::size_t i = 0; i < seq.n_nodes; ++i)
    out << (seq.node_ids.empty() ? std::to_string(i) : seq.node_ids[i]) << '\t' << i << '\n';
}

Split build_split(const SnapshotSequence& seq, const SplitSpec& spec) {
  if (spec.total() != seq.n_steps)
    throw ValidationError("split: " + std::to_string(spec.total()) + " steps requested but sequence has " +
                          std::to_string(seq.n_steps));
  if (spec.n_train == 0 || spec.n_val == 0 || spec.n_test == 0)
    throw ValidationError("split: every partition needs at least one step");
  Split split;
  for (std::size_t t = 0; t < seq.n_steps; ++t) {
    auto& part = t < spec.n_train ? split.train : (t < spec.n_train + spec.n_val ? split.val : split.test);
    for (NodeId v = 0; v < seq.n_nodes; ++v)
      if (seq.labels.at(v, t) != LabelTensor::kMissing) part.push_back(node_time(seq.n_nodes, v, t));
  }
  if (split.train.empty()) throw ValidationError("split: train partition has no labeled node-times");
  if (split.val.empty()) throw ValidationError("split: validation partition has no labeled node-times");
  if (split.test.empty()) throw ValidationError("split: test partition has no labeled node-times");
  return split;
}

SnapshotSequence synth_dsbm(const DsbmParams& p) {
  if (p.n_blocks == 0 || p.n_blocks > p.n_nodes) throw ValidationError("dsbm: need 1 <= n_blocks <= n_nodes");
  if (p.n_steps == 0) throw ValidationError("dsbm: n_steps must be >= 1");
  if (!(p.p_out >= 0.0 && p.p_out < p.p_in && p.p_in <= 1.0))
    throw ValidationError("dsbm: need 0 <= p_out < p_in <= 1");
  if (!(p.drift >= 0.0 && p.drift <= 1.0)) throw ValidationError("dsbm: drift must be in [0,1]");

  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<int> block(p.n_nodes);
  for (std::size_t v = 0; v < p.n_nodes; ++v) block[v] = static_cast<int>(v % p.n_blocks);
  std::shuffle(block.begin(), block.end(), rng);

  LabelTensor labels(p.n_nodes, p.n_steps);
  std::vector<std::vector<Edge>> per_step(p.n_steps);
  for (std::size_t t = 0; t < p.n_steps; ++t) {
    if (t > 0 && p.n_blocks > 1) {
      std::uniform_int_distribution<int> other(0, static_cast<int>(p.n_blocks) - 2);
      for (auto& b : block) {
        if (unit(rng) < p.drift) {
          int nb = other(rng);
          if (nb >= b) ++nb;
          b = nb;
        }
      }
    }
    for (std::size_t v = 0; v < p.n_nodes; ++v) labels.at(v, t) = block[v];
    auto& edges = per_step[t];
    for (std::size_t u = 0; u < p.n_nodes; ++u)
      for (std::size_t v = u + 1; v < p.n_nodes; ++v)
        if (unit(rng) < (block[u] == block[v] ? p.p_in : p.p_out)) edges.emplace_back(u, v);
  }
  return make_sequence(p.n_nodes, per_step, std::move(labels), p.n_blocks);
}

void write_edge_stream(const SnapshotSequence& seq, const std::filesystem::path& edges_path,
                       const std::filesystem::path& labels_path) {
  auto id = [&](NodeId v) { return seq.node_ids.empty() ? std::to_string(v) : seq.node_ids[v]; };
  std::ofstream edges(edges_path);
  if (!edges) throw std::runtime_error("cannot write " + edges_path.string());
  edges << "# u\tv\ttimestamp\n";
  for (std::size_t t = 0; t < seq.n_steps; ++t) {
    const auto& adj = seq.snapshots[t].adjacency;
    for (NodeId u = 0; u < seq.n_nodes; ++u)
      for (NodeId v : adj.row(u))
        if (u < v) edges << id(u) << '\t' << id(v) << '\t' << t << '\n';
  }
  std::ofstream labels(labels_path);
  if (!labels) throw std::runtime_error("cannot write " + labels_path.string());
  labels << "# v\ttimestamp\tclass\n";
  for (std::size_t t = 0; t < seq.n_steps; ++t)
    for (NodeId v = 0; v < seq.n_nodes; ++v)
      if (seq.labels.at(v, t) != LabelTensor::kMissing) labels << id(v) << '\t' << t << '\t' << seq.labels.at(v, t) << '\n';
}

}  // namespace tempaug
