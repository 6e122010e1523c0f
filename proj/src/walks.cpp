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

#include "tempaug/walks.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace tempaug {

std::string format_walk(const TemporalWalk& walk) {
  std::ostringstream out;
  out << '[';
  for (const auto& s : walk) out << '(' << s.from << ',' << s.to << ",t" << s.time << ')';
  out << ']';
  return out.str();
}

std::vector<TemporalWalk> enumerate_temporal_walks(const SnapshotSequence& seq, NodeId source,
                                                   std::size_t max_len, std::size_t budget) {
  if (source >= seq.n_nodes) throw ValidationError("walks: source out of range");
  std::vector<TemporalWalk> out;
  TemporalWalk current;
  auto extend = [&](auto&& self, NodeId at, std::size_t min_time) -> void {
    if (current.size() == max_len) return;
    for (std::size_t t = min_time; t < seq.n_steps; ++t) {
      for (NodeId next : seq.snapshots[t].adjacency.row(at)) {
        current.push_back({at, next, t});
        if (out.size() == budget) throw BudgetExceeded("walks: more than " + std::to_string(budget) + " walks");
        out.push_back(current);
        self(self, next, t);
        current.pop_back();
      }
    }
  };
  extend(extend, source, 0);
  return out;
}

namespace {

using NodeTimeWalk = std::vector<std::size_t>;

class EdgeIndex {
 public:
  EdgeIndex(std::size_t n_node_times, std::span<const AugmentedEdge> edges) : out_(n_node_times) {
    for (const auto& e : edges) {
      if (e.src >= n_node_times || e.dst >= n_node_times) throw ValidationError("verify: edge out of range");
      out_[e.src].push_back(e.dst);
    }
    for (auto& o : out_) {
      std::sort(o.begin(), o.end());
      o.erase(std::unique(o.begin(), o.end()), o.end());
    }
  }
  bool has(std::size_t src, std::size_t dst) const { return std::binary_search(out_[src].begin(), out_[src].end(), dst); }
  const std::vector<std::size_t>& out(std::size_t src) const { return out_[src]; }
  std::size_t size() const { return out_.size(); }

 private:
  std::vector<std::vector<std::size_t>> out_;
};

struct Checker {
  const SnapshotSequence& seq;
  bool hops;  // self-evolution hops (v,t)->(v,t+1) instead of direct cross edges
  const EdgeIndex& index;
  std::size_t budget;
  CorrespondenceReport report;

  std::size_t idx(NodeId v, std::size_t t) const { return t * seq.n_nodes + v; }

  std::string describe(std::size_t nt) const {
    return "(" + std::to_string(nt % seq.n_nodes) + ",t" + std::to_string(nt / seq.n_nodes) + ")";
  }

  void fail(std::string why) {
    if (!report.counterexample) report.counterexample = std::move(why);
  }

  // Temporal walk -> augmented walk; nullopt (plus counterexample) if an edge is missing.
  std::optional<NodeTimeWalk> image(const TemporalWalk& walk) {
    NodeTimeWalk path{idx(walk.front().from, walk.front().time)};
    std::size_t now = walk.front().time;
    for (const auto& step : walk) {
      auto take = [&](std::size_t dst) {
        if (!index.has(path.back(), dst)) {
          fail("temporal walk " + format_walk(walk) + " has no image: missing edge " + describe(path.back()) +
               "->" + describe(dst));
          return false;
        }
        path.push_back(dst);
        return true;
      };
      if (hops) {
        for (; now < step.time; ++now)
          if (!take(idx(step.from, now + 1))) return std::nullopt;
      } else {
        now = step.time;
      }
      if (!take(idx(step.to, step.time))) return std::nullopt;
    }
    return path;
  }

  void check_injective(std::size_t max_len) {
    std::set<NodeTimeWalk> images;
    bool ok = true;
    for (NodeId s = 0; s < seq.n_nodes; ++s) {
      for (const auto& walk : enumerate_temporal_walks(seq, s, max_len, budget)) {
        ++report.n_temporal_walks;
        auto img = image(walk);
        if (!img) {
          ok = false;
          continue;
        }
        if (!images.insert(std::move(*img)).second) {
          ok = false;
          fail("temporal walk " + format_walk(walk) + " shares its image with another walk");
        }
      }
    }
    report.injective_map_ok = ok;
  }

  // An augmented edge projects to a temporal hop, a self-evolution hop, or nothing valid.
  bool project_edge(std::size_t src, std::size_t dst) {
    const std::size_t n = seq.n_nodes;
    const NodeId u = src % n, v = dst % n;
    const std::size_t i = src / n, j = dst / n;
    bool valid;
    if (i > j) {
      valid = false;
    } else if (hops && u == v && j == i + 1) {
      valid = true;
    } else {
      valid = (hops ? i == j : true) && seq.snapshots[j].adjacency.contains(u, v);
    }
    if (!valid) fail("augmented edge " + describe(src) + "->" + describe(dst) + " projects to no temporal hop");
    return valid;
  }

  void check_converse(std::size_t max_len, bool& ok) {
    std::size_t walks = 0;
    std::vector<std::size_t> stack;
    auto extend = [&](auto&& self, std::size_t at, std::size_t depth) -> void {
      if (depth == max_len) return;
      for (std::size_t next : index.out(at)) {
        if (next == at) continue;
        if (++walks > budget) throw BudgetExceeded("verify: more than " + std::to_string(budget) + " augmented walks");
        // Prefixes were already validated; only the new edge needs checking.
        if (!project_edge(at, next)) {
          ok = false;
          continue;
        }
        self(self, next, depth + 1);
      }
    };
    for (std::size_t s = 0; s < index.size(); ++s) extend(extend, s, 0);
    report.n_augmented_walks = walks;
  }

  // Node-times (v,j) reachable from (u,i) by following Definition-style temporal walks.
  std::vector<char> temporal_oracle(NodeId u, std::size_t i) const {
    const std::size_t n = seq.n_nodes;
    std::vector<char> seen(n * seq.n_steps, 0);  // state (node, last hop time)
    std::deque<std::pair<NodeId, std::size_t>> queue{{u, i}};
    std::vector<char> reach(n * seq.n_steps, 0);
    while (!queue.empty()) {
      auto [x, tl] = queue.front();
      queue.pop_front();
      for (std::size_t t = tl; t < seq.n_steps; ++t) {
        for (NodeId y : seq.snapshots[t].adjacency.row(x)) {
          if (seen[idx(y, t)]) continue;
          seen[idx(y, t)] = 1;
          queue.emplace_back(y, t);
        }
      }
    }
    for (NodeId v = 0; v < n; ++v) {
      for (std::size_t j = i; j < seq.n_steps; ++j) {
        bool r;
        if (hops) {
          r = v == u;
          for (std::size_t t = i; t <= j && !r; ++t) r = seen[idx(v, t)];
        } else {
          r = (v == u && j == i) || seen[idx(v, j)];
        }
        reach[idx(v, j)] = r;
      }
    }
    return reach;
  }

  void check_reachability() {
    const std::size_t total = index.size();
    bool ok = true;
    for (std::size_t s = 0; s < total && ok; ++s) {
      std::vector<char> reach(total, 0);
      std::deque<std::size_t> queue{s};
      reach[s] = 1;
      while (!queue.empty()) {
        const std::size_t x = queue.front();
        queue.pop_front();
        for (std::size_t y : index.out(x))
          if (!reach[y]) {
            reach[y] = 1;
            queue.push_back(y);
          }
      }
      const auto expected = temporal_oracle(s % seq.n_nodes, s / seq.n_nodes);
      for (std::size_t d = 0; d < total; ++d) {
        if (reach[d] != expected[d]) {
          ok = false;
          fail(describe(d) + (reach[d] ? " reachable" : " unreachable") + " from " + describe(s) +
               " in the augmented graph but not by temporal walks");
          break;
        }
      }
    }
    report.reachability_ok = ok;
  }
};

}  // namespace

CorrespondenceReport verify_edges(const SnapshotSequence& seq, Realization realization,
                                  std::span<const AugmentedEdge> edges, std::size_t max_len, std::size_t budget) {
  seq.validate();
  if (max_len == 0) throw ValidationError("verify: max_len must be >= 1");
  EdgeIndex index(seq.n_nodes * seq.n_steps, edges);
  Checker checker{seq, realization != Realization::Full, index, budget, {}};
  checker.check_injective(max_len);
  bool converse_ok = true;
  checker.check_converse(max_len, converse_ok);
  checker.report.injective_map_ok = checker.report.injective_map_ok && converse_ok;
  checker.check_reachability();
  return checker.report;
}

CorrespondenceReport verify_correspondence(const SnapshotSequence& seq, Realization realization,
                                           std::size_t max_len, std::size_t budget) {
  const auto graph = build_augmented(seq, realization);
  std::vector<AugmentedEdge> edges;
  for (const auto& part : graph.parts) {
    auto e = part.edges();
    edges.insert(edges.end(), e.begin(), e.end());
  }
  return verify_edges(seq, realization, edges, max_len, budget);
}

}  // namespace tempaug
