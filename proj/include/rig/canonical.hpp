#pragma once

// Canonical codes for rooted connected graphs.
//
// Two stages:
//  1. Twin compression. Non-root vertices with identical closed neighborhoods
//     (clique modules) or identical open neighborhoods (independent modules)
//     and identical labels are merged into one labeled node, repeatedly, until
//     no twins remain. The procedure is isomorphism-invariant and invertible
//     from the labels, so it preserves the isomorphism type exactly while
//     removing the factorial symmetry of cliques and stars.
//  2. Individualization-refinement on the compressed graph: color refinement
//     seeded by (distance from root, label), exhaustive branching on the first
//     non-singleton cell, minimum adjacency certificate over leaves. Search is
//     pruned with automorphisms discovered at equivalent leaves (orbit pruning
//     at every node plus the usual jump-back to the divergence point).

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"

namespace rig {

namespace detail {

struct LabeledGraph {
  std::vector<std::string> label;
  std::vector<std::vector<int>> adj;  // sorted
  int root = 0;
  int size() const { return static_cast<int>(adj.size()); }
};

inline void append_varint(std::string& out, std::uint64_t x) {
  while (x >= 0x80) {
    out.push_back(static_cast<char>((x & 0x7f) | 0x80));
    x >>= 7;
  }
  out.push_back(static_cast<char>(x));
}

// One round of twin merging. Returns false when nothing merged.
inline bool merge_twins(LabeledGraph& g, bool closed) {
  const int n = g.size();
  std::map<std::pair<std::string, std::vector<int>>, std::vector<int>> groups;
  for (int u = 0; u < n; ++u) {
    if (u == g.root) continue;
    std::vector<int> key = g.adj[u];
    if (closed) key.insert(std::lower_bound(key.begin(), key.end(), u), u);
    groups[{g.label[u], std::move(key)}].push_back(u);
  }
  std::vector<int> rep(n);
  std::iota(rep.begin(), rep.end(), 0);
  std::vector<std::string> new_label = g.label;
  bool any = false;
  for (auto& [key, members] : groups) {
    if (members.size() < 2) continue;
    any = true;
    for (int m : members) rep[m] = members.front();
    new_label[members.front()] =
        std::string(closed ? "C" : "O") + std::to_string(members.size()) + "[" + key.first + "]";
  }
  if (!any) return false;
  std::vector<int> id(n, -1);
  int next = 0;
  for (int u = 0; u < n; ++u)
    if (rep[u] == u) id[u] = next++;
  LabeledGraph out;
  out.label.resize(next);
  out.adj.resize(next);
  out.root = id[g.root];
  for (int u = 0; u < n; ++u) {
    if (rep[u] != u) continue;
    const int iu = id[u];
    out.label[iu] = std::move(new_label[u]);
    for (int w : g.adj[u]) {
      const int iw = id[rep[w]];
      if (iw != iu) out.adj[iu].push_back(iw);
    }
    std::sort(out.adj[iu].begin(), out.adj[iu].end());
    out.adj[iu].erase(std::unique(out.adj[iu].begin(), out.adj[iu].end()), out.adj[iu].end());
  }
  g = std::move(out);
  return true;
}

class CanonicalSearch {
 public:
  explicit CanonicalSearch(const LabeledGraph& g) : g_(g), n_(g.size()) {}

  std::string run() {
    std::vector<int> col = initial_colors();
    std::vector<int> prefix;
    search(col, prefix);
    return encode(best_pos_);
  }

  std::size_t leaves_visited() const { return leaves_; }

 private:
  std::vector<int> initial_colors() const {
    std::vector<int> dist(n_, -1);
    std::vector<int> queue{g_.root};
    dist[g_.root] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (int w : g_.adj[queue[h]])
        if (dist[w] < 0) {
          dist[w] = dist[queue[h]] + 1;
          queue.push_back(w);
        }
    std::vector<std::pair<int, const std::string*>> keys(n_);
    for (int v = 0; v < n_; ++v) keys[v] = {dist[v], &g_.label[v]};
    std::vector<int> order(n_);
    std::iota(order.begin(), order.end(), 0);
    auto less = [&](int a, int b) {
      if (keys[a].first != keys[b].first) return keys[a].first < keys[b].first;
      return *keys[a].second < *keys[b].second;
    };
    std::sort(order.begin(), order.end(), less);
    std::vector<int> col(n_);
    for (int i = 0, rank = 0; i < n_; ++i) {
      if (i > 0 && less(order[i - 1], order[i])) rank = i;
      col[order[i]] = rank;
    }
    return col;
  }

  // Colors are cell start offsets in the ordered partition (rank of the first
  // member), so they stay canonical and comparable across branches.
  void refine(std::vector<int>& col) const {
    std::vector<std::vector<int>> sig(n_);
    std::vector<int> order(n_);
    int cells = count_cells(col);
    while (cells < n_) {
      for (int v = 0; v < n_; ++v) {
        auto& s = sig[v];
        s.clear();
        s.push_back(col[v]);
        for (int w : g_.adj[v]) s.push_back(col[w]);
        std::sort(s.begin() + 1, s.end());
      }
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) { return sig[a] < sig[b]; });
      int new_cells = 0;
      for (int i = 0, start = 0; i < n_; ++i) {
        if (i == 0 || sig[order[i - 1]] != sig[order[i]]) {
          start = i;
          ++new_cells;
        }
        col[order[i]] = start;
      }
      if (new_cells == cells) break;
      cells = new_cells;
    }
  }

  static int count_cells(const std::vector<int>& col) {
    std::vector<int> c(col);
    std::sort(c.begin(), c.end());
    return static_cast<int>(std::unique(c.begin(), c.end()) - c.begin());
  }

  std::vector<std::uint64_t> certificate(const std::vector<int>& pos) const {
    const int words = (n_ + 63) / 64;
    std::vector<std::uint64_t> cert(static_cast<std::size_t>(n_) * words, 0);
    for (int v = 0; v < n_; ++v)
      for (int w : g_.adj[v]) cert[static_cast<std::size_t>(pos[v]) * words + pos[w] / 64] |= 1ULL << (pos[w] % 64);
    return cert;
  }

  // Returns the depth to resume at: depth of the current node means "continue
  // normally"; a smaller value unwinds to that ancestor.
  int search(std::vector<int> col, std::vector<int>& prefix) {
    refine(col);
    const int depth = static_cast<int>(prefix.size());
    int target = -1, target_size = 0;
    {
      std::vector<int> size(n_, 0);
      for (int v = 0; v < n_; ++v) ++size[col[v]];
      for (int c = 0; c < n_; ++c)
        if (size[c] >= 2) {
          target = c;
          target_size = size[c];
          break;
        }
    }
    if (target < 0) return leaf(col, prefix);
    std::vector<int> cell;
    cell.reserve(target_size);
    for (int v = 0; v < n_; ++v)
      if (col[v] == target) cell.push_back(v);

    std::vector<int> tried;
    for (int v : cell) {
      if (!tried.empty() && same_orbit_as_any(v, tried, prefix)) continue;
      tried.push_back(v);
      std::vector<int> child(col);
      for (int u : cell)
        if (u != v) child[u] = target + 1;
      prefix.push_back(v);
      const int resume = search(std::move(child), prefix);
      prefix.pop_back();
      if (resume < depth) return resume;
    }
    return depth;
  }

  int leaf(const std::vector<int>& pos, const std::vector<int>& prefix) {
    ++leaves_;
    auto cert = certificate(pos);
    const int depth = static_cast<int>(prefix.size());
    if (leaves_ == 1) {
      first_pos_ = best_pos_ = pos;
      first_cert_ = best_cert_ = std::move(cert);
      first_path_ = best_path_ = prefix;
      return depth;
    }
    if (cert == first_cert_) {
      record_automorphism(first_pos_, pos);
      return common_prefix(first_path_, prefix);
    }
    if (cert == best_cert_) {
      record_automorphism(best_pos_, pos);
      return common_prefix(best_path_, prefix);
    }
    if (cert < best_cert_) {
      best_cert_ = std::move(cert);
      best_pos_ = pos;
      best_path_ = prefix;
    }
    return depth;
  }

  static int common_prefix(const std::vector<int>& a, const std::vector<int>& b) {
    int k = 0;
    while (k < static_cast<int>(a.size()) && k < static_cast<int>(b.size()) && a[k] == b[k]) ++k;
    return k;
  }

  void record_automorphism(const std::vector<int>& from_pos, const std::vector<int>& to_pos) {
    std::vector<int> at(n_);
    for (int v = 0; v < n_; ++v) at[to_pos[v]] = v;
    std::vector<int> gamma(n_);
    bool identity = true;
    for (int v = 0; v < n_; ++v) {
      gamma[v] = at[from_pos[v]];
      identity = identity && gamma[v] == v;
    }
    if (!identity) autos_.push_back(std::move(gamma));
  }

  // Orbit test under the automorphisms found so far that fix prefix pointwise.
  bool same_orbit_as_any(int v, const std::vector<int>& tried, const std::vector<int>& prefix) const {
    std::vector<int> parent(n_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool any = false;
    for (const auto& gamma : autos_) {
      bool fixes = true;
      for (int p : prefix)
        if (gamma[p] != p) {
          fixes = false;
          break;
        }
      if (!fixes) continue;
      any = true;
      for (int x = 0; x < n_; ++x) parent[find(x)] = find(gamma[x]);
    }
    if (!any) return false;
    const int rv = find(v);
    for (int t : tried)
      if (find(t) == rv) return true;
    return false;
  }

  std::string encode(const std::vector<int>& pos) const {
    std::string out = "RG1";
    append_varint(out, static_cast<std::uint64_t>(n_));
    std::vector<int> at(n_);
    for (int v = 0; v < n_; ++v) at[pos[v]] = v;
    for (int p = 0; p < n_; ++p) {
      const auto& l = g_.label[at[p]];
      append_varint(out, l.size());
      out += l;
    }
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < n_; ++v)
      for (int w : g_.adj[v])
        if (pos[v] < pos[w]) edges.emplace_back(pos[v], pos[w]);
    std::sort(edges.begin(), edges.end());
    append_varint(out, edges.size());
    for (auto [a, b] : edges) {
      append_varint(out, static_cast<std::uint64_t>(a));
      append_varint(out, static_cast<std::uint64_t>(b));
    }
    return out;
  }

  const LabeledGraph& g_;
  int n_;
  std::size_t leaves_ = 0;
  std::vector<int> first_pos_, best_pos_, first_path_, best_path_;
  std::vector<std::uint64_t> first_cert_, best_cert_;
  std::vector<std::vector<int>> autos_;
};

}  // namespace detail

// Canonical byte string of (g, root): equal for two inputs iff there is an
// isomorphism between them mapping root to root.
inline std::string canonical_code(const Graph& g, vertex_t root) {
  const std::size_t n = g.vertex_count();
  if (root >= n) throw validation_error("canonical_code: root out of range");
  if (!is_connected(g)) throw validation_error("canonical_code: graph must be connected");
  detail::LabeledGraph lg;
  lg.root = static_cast<int>(root);
  lg.label.assign(n, "a");
  lg.label[root] = "r";
  lg.adj.resize(n);
  for (vertex_t v = 0; v < n; ++v) {
    auto nb = g.neighbors(v);
    lg.adj[v].assign(nb.begin(), nb.end());
  }
  while (detail::merge_twins(lg, true) || detail::merge_twins(lg, false)) {
  }
  return detail::CanonicalSearch(lg).run();
}

inline std::string to_hex(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

}  // namespace rig
