#pragma once

// Exact homomorphism and embedding counts of small connected patterns.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"
#include "graph.hpp"
#include "parallel.hpp"
#include "rooted.hpp"

namespace rig {

using bigint = boost::multiprecision::cpp_int;

inline constexpr std::size_t kDefaultPatternCap = 8;

class Pattern {
 public:
  Pattern(Graph g, std::optional<vertex_t> root = std::nullopt, std::size_t cap = kDefaultPatternCap)
      : g_(std::move(g)), root_(root) {
    const std::size_t h = g_.vertex_count();
    if (h < 2) throw validation_error("pattern needs at least 2 vertices");
    if (h > cap)
      throw validation_error("pattern has " + std::to_string(h) + " vertices, cap is " + std::to_string(cap));
    if (!is_connected(g_)) throw validation_error("pattern must be connected");
    if (root_ && *root_ >= h) throw validation_error("pattern root out of range");
  }

  static Pattern complete(std::size_t n) {
    std::vector<edge_t> e;
    for (vertex_t i = 0; i < n; ++i)
      for (vertex_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return Pattern(Graph::from_edges(n, e));
  }
  // path on n vertices
  static Pattern path(std::size_t n) {
    std::vector<edge_t> e;
    for (vertex_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return Pattern(Graph::from_edges(n, e));
  }
  // K_{1,t} with center 0
  static Pattern star(std::size_t t) {
    std::vector<edge_t> e;
    for (vertex_t i = 1; i <= t; ++i) e.emplace_back(0, i);
    return Pattern(Graph::from_edges(t + 1, e));
  }
  static Pattern cycle(std::size_t n) {
    require(n >= 3, "cycle needs n >= 3");
    std::vector<edge_t> e;
    for (vertex_t i = 0; i < n; ++i) e.emplace_back(i, static_cast<vertex_t>((i + 1) % n));
    return Pattern(Graph::from_edges(n, e));
  }

  // K<n>, P<n>, C<n>, S<t> (the star K_{1,t}), optionally followed by
  // "@<v>" to root at vertex v; e.g. "K3@0", "P3@1".
  static Pattern parse(const std::string& s) {
    auto at = s.find('@');
    std::string body = s.substr(0, at);
    require(body.size() >= 2, "bad pattern name '" + s + "'");
    std::size_t n = 0;
    try {
      std::size_t used = 0;
      n = std::stoul(body.substr(1), &used);
      require(used == body.size() - 1, "bad pattern name '" + s + "'");
    } catch (const std::logic_error&) {
      throw validation_error("bad pattern name '" + s + "'");
    }
    std::optional<Pattern> p;
    switch (body[0]) {
      case 'K': p = complete(n); break;
      case 'P': p = path(n); break;
      case 'C': p = cycle(n); break;
      case 'S': p = star(n); break;
      default: throw validation_error("bad pattern name '" + s + "'");
    }
    if (at != std::string::npos) {
      try {
        return p->rooted(static_cast<vertex_t>(std::stoul(s.substr(at + 1))));
      } catch (const std::logic_error&) {
        throw validation_error("bad pattern root in '" + s + "'");
      }
    }
    return *p;
  }

  Pattern rooted(vertex_t r) const { return Pattern(g_, r); }

  // One representative rooting per root-preserving isomorphism class.
  std::vector<Pattern> rootings() const {
    std::vector<Pattern> out;
    std::set<std::string> seen;
    for (vertex_t v = 0; v < size(); ++v)
      if (seen.insert(canonical_code(g_, v)).second) out.push_back(rooted(v));
    return out;
  }

  const Graph& graph() const { return g_; }
  std::optional<vertex_t> root() const { return root_; }
  std::size_t size() const { return g_.vertex_count(); }

 private:
  Graph g_;
  std::optional<vertex_t> root_;
};

// Connected graphs on h vertices, one per isomorphism class.
inline std::vector<Pattern> connected_patterns(std::size_t h) {
  require(h >= 2 && h <= 6, "connected_patterns: h must be in [2, 6]");
  std::vector<edge_t> slots;
  for (vertex_t i = 0; i < h; ++i)
    for (vertex_t j = i + 1; j < h; ++j) slots.emplace_back(i, j);
  std::vector<Pattern> out;
  std::set<std::string> seen;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    std::vector<edge_t> e;
    for (std::size_t b = 0; b < slots.size(); ++b)
      if (mask >> b & 1) e.push_back(slots[b]);
    if (e.size() + 1 < h) continue;
    Graph g = Graph::from_edges(h, e);
    if (!is_connected(g)) continue;
    // the unrooted class is the set of its rooted codes
    std::string key;
    std::vector<std::string> codes;
    for (vertex_t v = 0; v < h; ++v) codes.push_back(canonical_code(g, v));
    key = *std::min_element(codes.begin(), codes.end());
    if (seen.insert(key).second) out.emplace_back(std::move(g));
  }
  return out;
}

namespace detail {

// Sum of unsigned 128-bit terms that spills into a big integer on overflow.
class Accumulator {
 public:
  using u128 = unsigned __int128;
  void add(u128 x) {
    if (__builtin_add_overflow(low_, x, &low_)) {
      big_ += to_big(low_ - x);
      low_ = x;
    }
  }
  void add(const bigint& x) { big_ += x; }
  void merge(const Accumulator& o) {
    add(o.low_);
    big_ += o.big_;
  }
  bigint value() const { return big_ + to_big(low_); }

  static bigint to_big(u128 x) {
    bigint b = static_cast<std::uint64_t>(x >> 64);
    b <<= 64;
    b += static_cast<std::uint64_t>(x);
    return b;
  }

 private:
  u128 low_ = 0;
  bigint big_ = 0;
};

// Backtracking counter for maps of a pattern into a host. Pattern vertices
// are placed in a connected order starting at `first`; every later vertex has
// an already-placed neighbour whose image supplies the candidates. Pendant
// leaves are moved to the end and counted in bulk where possible.
class MapCounter {
 public:
  MapCounter(const Graph& pattern, const Graph& host, vertex_t first, bool injective)
      : p_(pattern), g_(host), injective_(injective) {
    const std::size_t h = p_.vertex_count();
    std::vector<char> leaf(h, 0);
    if (h > 2)
      for (vertex_t v = 0; v < h; ++v) leaf[v] = (v != first && p_.degree(v) == 1);
    std::vector<char> placed(h, 0);
    order_.push_back(first);
    placed[first] = 1;
    auto grow = [&](bool leaves) {
      while (true) {
        int best = -1;
        std::size_t best_links = 0;
        for (vertex_t v = 0; v < h; ++v) {
          if (placed[v] || static_cast<bool>(leaf[v]) != leaves) continue;
          std::size_t links = 0;
          for (vertex_t w : p_.neighbors(v)) links += placed[w];
          if (links == 0) continue;
          if (best < 0 || links > best_links ||
              (links == best_links && p_.degree(v) > p_.degree(static_cast<vertex_t>(best)))) {
            best = static_cast<int>(v);
            best_links = links;
          }
        }
        if (best < 0) return;
        placed[best] = 1;
        order_.push_back(static_cast<vertex_t>(best));
      }
    };
    grow(false);
    core_ = order_.size();
    grow(true);
    pos_.assign(h, 0);
    for (std::size_t i = 0; i < h; ++i) pos_[order_[i]] = i;
    back_.resize(h);
    for (std::size_t i = 1; i < h; ++i)
      for (vertex_t w : p_.neighbors(order_[i]))
        if (pos_[w] < i) back_[i].push_back(pos_[w]);
    // leaf parents; bulk-count all leaves at once when they share one parent
    for (std::size_t i = core_; i < h; ++i) leaf_parent_.push_back(back_[i][0]);
    shared_parent_ = !leaf_parent_.empty() &&
                     std::all_of(leaf_parent_.begin(), leaf_parent_.end(),
                                 [&](std::size_t q) { return q == leaf_parent_[0]; });
    img_.assign(h, 0);
  }

  // Number of maps sending `first` to v.
  void count_from(vertex_t v, Accumulator& acc) {
    img_[0] = v;
    extend(1, acc);
  }

 private:
  using u128 = Accumulator::u128;

  bool used(vertex_t x, std::size_t upto) const {
    for (std::size_t j = 0; j < upto; ++j)
      if (img_[j] == x) return true;
    return false;
  }

  // degree of the image at position q minus already-used images among its
  // neighbours (positions < upto)
  std::size_t free_degree(std::size_t q, std::size_t upto) const {
    std::size_t d = g_.degree(img_[q]);
    if (!injective_) return d;
    for (std::size_t j = 0; j < upto; ++j)
      if (g_.adjacent(img_[q], img_[j])) --d;
    return d;
  }

  void extend(std::size_t i, Accumulator& acc) {
    const std::size_t h = order_.size();
    if (i == h) {
      acc.add(u128{1});
      return;
    }
    if (i == core_) {
      tail(acc);
      return;
    }
    // candidates from the placed neighbour with the smallest image degree
    std::size_t anchor = back_[i][0];
    for (std::size_t q : back_[i])
      if (g_.degree(img_[q]) < g_.degree(img_[anchor])) anchor = q;
    const bool last = i + 1 == h;
    u128 bulk = 0;
    for (vertex_t x : g_.neighbors(img_[anchor])) {
      bool ok = true;
      for (std::size_t q : back_[i])
        if (q != anchor && !g_.adjacent(img_[q], x)) {
          ok = false;
          break;
        }
      if (!ok || (injective_ && used(x, i))) continue;
      if (last) {
        ++bulk;
      } else {
        img_[i] = x;
        extend(i + 1, acc);
      }
    }
    if (last) acc.add(bulk);
  }

  // All remaining positions are pendant leaves of core vertices.
  void tail(Accumulator& acc) {
    const std::size_t h = order_.size();
    if (!injective_) {
      u128 prod = 1;
      bool overflow = false;
      for (std::size_t q : leaf_parent_)
        overflow |= __builtin_mul_overflow(prod, static_cast<u128>(g_.degree(img_[q])), &prod);
      if (!overflow) {
        acc.add(prod);
      } else {
        bigint b = 1;
        for (std::size_t q : leaf_parent_) b *= g_.degree(img_[q]);
        acc.add(b);
      }
      return;
    }
    if (shared_parent_) {
      const std::size_t avail = free_degree(leaf_parent_[0], core_);
      const std::size_t t = h - core_;
      if (avail < t) return;
      u128 prod = 1;
      bool overflow = false;
      for (std::size_t j = 0; j < t; ++j) overflow |= __builtin_mul_overflow(prod, static_cast<u128>(avail - j), &prod);
      if (!overflow) {
        acc.add(prod);
      } else {
        bigint b = 1;
        for (std::size_t j = 0; j < t; ++j) b *= avail - j;
        acc.add(b);
      }
      return;
    }
    leaves(core_, acc);
  }

  // injective leaves with different parents: enumerate all but the last
  void leaves(std::size_t i, Accumulator& acc) {
    const std::size_t h = order_.size();
    const std::size_t q = leaf_parent_[i - core_];
    if (i + 1 == h) {
      acc.add(static_cast<u128>(free_degree(q, i)));
      return;
    }
    for (vertex_t x : g_.neighbors(img_[q])) {
      if (used(x, i)) continue;
      img_[i] = x;
      leaves(i + 1, acc);
    }
  }

  const Graph& p_;
  const Graph& g_;
  bool injective_;
  std::vector<vertex_t> order_;
  std::vector<std::size_t> pos_;
  std::vector<std::vector<std::size_t>> back_;
  std::size_t core_ = 0;
  std::vector<std::size_t> leaf_parent_;
  bool shared_parent_ = false;
  std::vector<vertex_t> img_;
};

inline vertex_t max_degree_vertex(const Graph& p) {
  vertex_t best = 0;
  for (vertex_t v = 1; v < p.vertex_count(); ++v)
    if (p.degree(v) > p.degree(best)) best = v;
  return best;
}

inline bigint total_count(const Pattern& H, const Graph& G, bool injective, unsigned threads) {
  const vertex_t first = max_degree_vertex(H.graph());
  const std::size_t n = G.vertex_count();
  std::vector<Accumulator> parts(std::max(1u, threads));
  parallel_blocks(n, threads, [&](std::size_t begin, std::size_t end, unsigned t) {
    MapCounter mc(H.graph(), G, first, injective);
    for (std::size_t v = begin; v < end; ++v) mc.count_from(static_cast<vertex_t>(v), parts[t]);
  });
  Accumulator acc;
  for (const auto& p : parts) acc.merge(p);
  return acc.value();
}

}  // namespace detail

// Adjacency-preserving maps V(H) -> V(G).
inline bigint hom_count(const Pattern& H, const Graph& G, unsigned threads = 1) {
  return detail::total_count(H, G, false, threads);
}

// Injective adjacency-preserving maps V(H) -> V(G).
inline bigint emb_count(const Pattern& H, const Graph& G, unsigned threads = 1) {
  return detail::total_count(H, G, true, threads);
}

// Maps pinning the root of H to v; embeddings by default, homomorphisms when
// hom_mode is set.
inline bigint rooted_emb_count(const Pattern& H, const Graph& G, vertex_t v, bool hom_mode = false) {
  if (!H.root()) throw validation_error("rooted_emb_count: pattern has no root");
  if (v >= G.vertex_count()) throw validation_error("rooted_emb_count: vertex out of range");
  detail::MapCounter mc(H.graph(), G, *H.root(), !hom_mode);
  detail::Accumulator acc;
  mc.count_from(v, acc);
  return acc.value();
}

struct SidorenkoCheck {
  bigint hom;
  bigint bound;
  bool holds = false;
};

// hom(H, G) against sum_v d(v)^(h-1).
inline SidorenkoCheck sidorenko_bound(const Pattern& H, const Graph& G, unsigned threads = 1) {
  SidorenkoCheck s;
  s.hom = hom_count(H, G, threads);
  const unsigned e = static_cast<unsigned>(H.size() - 1);
  for (vertex_t v = 0; v < G.vertex_count(); ++v) s.bound += boost::multiprecision::pow(bigint(G.degree(v)), e);
  s.holds = s.hom <= s.bound;
  return s;
}

}  // namespace rig
