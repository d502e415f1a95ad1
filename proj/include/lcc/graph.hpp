#pragma once

#include "lcc/types.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lcc {

struct NormalForm;

/// A graph on [n] whose edges are partitioned into labeled partial matchings,
/// one per vertex label. Vertices and labels are 0-based.
///
/// for_each_incidence(u, f) calls f(other, label) for every edge at u;
/// for_each_edge(label, f) calls f(u, v) for every edge of that label.
/// contains(v) restricts both vertices and labels for subgraph views.
template <class G>
concept MatchingGraph = requires(const G &g, Vertex v) {
  { g.vertex_count() } -> std::convertible_to<std::size_t>;
  { g.contains(v) } -> std::convertible_to<bool>;
  { g.delta() } -> std::convertible_to<double>;
  g.for_each_incidence(v, [](Vertex, Vertex) {});
  g.for_each_edge(v, [](Vertex, Vertex) {});
};

/// Explicitly stored labeled matching graph with a CSR incidence index.
class LabeledMatchingGraph {
public:
  LabeledMatchingGraph() = default;

  /// Validates that every matching is vertex-disjoint, in range, and avoids
  /// its own label.
  LabeledMatchingGraph(std::size_t n, double delta, std::vector<std::vector<Edge>> matchings);

  std::size_t vertex_count() const { return n_; }
  bool contains(Vertex v) const { return v < n_; }
  double delta() const { return delta_; }
  std::size_t edge_count() const { return incidences_.size() / 2; }

  const std::vector<Edge> &matching(Vertex label) const { return matchings_.at(label); }
  const std::vector<std::vector<Edge>> &matchings() const { return matchings_; }
  std::size_t degree(Vertex u) const { return offsets_[u + 1] - offsets_[u]; }

  template <class F> void for_each_incidence(Vertex u, F &&f) const {
    for (std::size_t k = offsets_[u]; k < offsets_[u + 1]; ++k)
      f(incidences_[k].other, incidences_[k].label);
  }
  template <class F> void for_each_edge(Vertex label, F &&f) const {
    for (const auto &e : matchings_[label])
      f(e.u, e.v);
  }

  bool operator==(const LabeledMatchingGraph &o) const {
    return n_ == o.n_ && delta_ == o.delta_ && matchings_ == o.matchings_;
  }

private:
  struct Incidence {
    Vertex other;
    Vertex label;
  };

  std::size_t n_ = 0;
  double delta_ = 0;
  std::vector<std::vector<Edge>> matchings_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Incidence> incidences_;
};

/// The matching graph of the Hadamard corrector on n = 2^r positions, computed
/// on the fly. Label a != 0 carries {xi, a ^ xi} for every xi except the pair
/// {0, a}. Position 0 always holds 0, so label 0 carries the constant-recovery
/// pairs {xi, xi ^ 1} for even xi >= 2. Every label has n/2 - 1 edges.
class HadamardGraph {
public:
  explicit HadamardGraph(std::size_t n);

  std::size_t vertex_count() const { return n_; }
  bool contains(Vertex v) const { return v < n_; }
  double delta() const { return (static_cast<double>(n_) / 2 - 1) / static_cast<double>(n_); }

  template <class F> void for_each_incidence(Vertex u, F &&f) const {
    if (u == 0)
      return;
    for (Vertex w = 1; w < n_; ++w)
      if (w != u)
        f(w, u ^ w);
    if (u >= 2)
      f(u ^ 1u, Vertex{0});
  }
  template <class F> void for_each_edge(Vertex label, F &&f) const {
    if (label == 0) {
      for (Vertex x = 2; x < n_; x += 2)
        f(x, x + 1);
      return;
    }
    for (Vertex x = 1; x < n_; ++x)
      if (x != label && x < (label ^ x))
        f(x, label ^ x);
  }

private:
  std::size_t n_;
};

/// n perfect matchings from the rotations of the round-robin factorization of
/// K_n (label l uses round (l + 1) mod (n - 1)), each minus the edge at its label.
class PerfectGraph {
public:
  explicit PerfectGraph(std::size_t n);

  std::size_t vertex_count() const { return n_; }
  bool contains(Vertex v) const { return v < n_; }
  double delta() const { return (static_cast<double>(n_) / 2 - 1) / static_cast<double>(n_); }

  /// Partner of u in the full perfect matching of `label`.
  Vertex partner(Vertex u, Vertex label) const {
    const Vertex m = static_cast<Vertex>(n_ - 1);
    const Vertex round = (label + 1) % m;
    if (u == m)
      return round;
    if (u == round)
      return m;
    return static_cast<Vertex>((2 * static_cast<std::uint64_t>(round) + m - u) % m);
  }

  template <class F> void for_each_incidence(Vertex u, F &&f) const {
    for (Vertex label = 0; label < n_; ++label) {
      if (label == u)
        continue;
      const Vertex w = partner(u, label);
      if (w != label)
        f(w, label);
    }
  }
  template <class F> void for_each_edge(Vertex label, F &&f) const {
    for (Vertex u = 0; u < n_; ++u) {
      const Vertex w = partner(u, label);
      if (u < w && u != label && w != label)
        f(u, w);
    }
  }

private:
  std::size_t n_;
};

/// The subgraph induced by an active vertex set: only active vertices, and
/// only edges whose endpoints and label are all active.
template <MatchingGraph G> class SubgraphView {
public:
  SubgraphView(const G &g, std::vector<std::uint8_t> active) : g_(&g), active_(std::move(active)) {
    if (active_.size() != g.vertex_count())
      throw PreconditionError("active mask has wrong size");
  }

  std::size_t vertex_count() const { return g_->vertex_count(); }
  bool contains(Vertex v) const { return v < active_.size() && active_[v] && g_->contains(v); }
  double delta() const { return g_->delta(); }
  const std::vector<std::uint8_t> &active() const { return active_; }

  template <class F> void for_each_incidence(Vertex u, F &&f) const {
    g_->for_each_incidence(u, [&](Vertex w, Vertex label) {
      if (active_[w] && active_[label])
        f(w, label);
    });
  }
  template <class F> void for_each_edge(Vertex label, F &&f) const {
    if (!active_[label])
      return;
    g_->for_each_edge(label, [&](Vertex a, Vertex b) {
      if (active_[a] && active_[b])
        f(a, b);
    });
  }

private:
  const G *g_;
  std::vector<std::uint8_t> active_;
};

/// Cyclic-shift partial matching of `size` edges avoiding `label`:
/// {label+1, label+2}, {label+3, label+4}, ... modulo n.
std::vector<Edge> dummy_matching(std::size_t n, Vertex label, std::size_t size);

/// G with the matchings of the given labels replaced by dummy matchings of
/// ceil(delta n) edges.
template <MatchingGraph G> class DummyAugmented {
public:
  DummyAugmented(const G &g, std::span<const Vertex> labels, double delta)
      : g_(&g), replaced_(g.vertex_count(), 0), dummy_(g.vertex_count()) {
    const std::size_t n = g.vertex_count();
    const auto size = static_cast<std::size_t>(std::ceil(delta * static_cast<double>(n) - 1e-9));
    std::vector<std::vector<std::pair<Vertex, Vertex>>> by_vertex(n);
    for (Vertex label : labels) {
      if (label >= n)
        throw PreconditionError("pre-seeded vertex out of range");
      if (replaced_[label])
        continue;
      replaced_[label] = 1;
      dummy_[label] = dummy_matching(n, label, size);
      for (const auto &e : dummy_[label]) {
        by_vertex[e.u].emplace_back(e.v, label);
        by_vertex[e.v].emplace_back(e.u, label);
      }
    }
    offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v)
      offsets_[v + 1] = offsets_[v] + by_vertex[v].size();
    incidences_.reserve(offsets_[n]);
    for (auto &list : by_vertex)
      incidences_.insert(incidences_.end(), list.begin(), list.end());
  }

  std::size_t vertex_count() const { return g_->vertex_count(); }
  bool contains(Vertex v) const { return g_->contains(v); }
  double delta() const { return g_->delta(); }

  template <class F> void for_each_incidence(Vertex u, F &&f) const {
    g_->for_each_incidence(u, [&](Vertex w, Vertex label) {
      if (!replaced_[label])
        f(w, label);
    });
    for (std::size_t k = offsets_[u]; k < offsets_[u + 1]; ++k)
      f(incidences_[k].first, incidences_[k].second);
  }
  template <class F> void for_each_edge(Vertex label, F &&f) const {
    if (!replaced_[label]) {
      g_->for_each_edge(label, f);
      return;
    }
    for (const auto &e : dummy_[label])
      f(e.u, e.v);
  }

private:
  const G *g_;
  std::vector<std::uint8_t> replaced_;
  std::vector<std::vector<Edge>> dummy_;
  std::vector<std::size_t> offsets_;
  std::vector<std::pair<Vertex, Vertex>> incidences_;
};

template <MatchingGraph G> std::size_t matching_size(const G &g, Vertex label) {
  std::size_t s = 0;
  g.for_each_edge(label, [&](Vertex, Vertex) { ++s; });
  return s;
}

template <MatchingGraph G> std::size_t degree(const G &g, Vertex u) {
  std::size_t d = 0;
  g.for_each_incidence(u, [&](Vertex, Vertex) { ++d; });
  return d;
}

template <MatchingGraph G> LabeledMatchingGraph materialize(const G &g) {
  std::vector<std::vector<Edge>> matchings(g.vertex_count());
  for (Vertex label = 0; label < g.vertex_count(); ++label) {
    if (!g.contains(label))
      continue;
    g.for_each_edge(label, [&](Vertex a, Vertex b) { matchings[label].emplace_back(a, b); });
    std::sort(matchings[label].begin(), matchings[label].end());
  }
  return LabeledMatchingGraph(g.vertex_count(), g.delta(), std::move(matchings));
}

enum class InstanceKind { hadamard, random, concat, perfect };

InstanceKind parse_instance_kind(const std::string &name);
std::string to_string(InstanceKind kind);

struct InstanceParams {
  std::size_t n = 0;
  double delta = 0.25; // used by random and concat
};

/// `size` uniformly random disjoint edges avoiding `label`.
std::vector<Edge> random_matching(std::size_t n, Vertex label, std::size_t size, Rng &rng);

LabeledMatchingGraph gen_instance(InstanceKind kind, const InstanceParams &params, std::uint64_t rng_seed);

/// The graph on [n] whose label-i matching is the T2 matching of i; T1 labels
/// carry no edges. delta is tau / 4.
LabeledMatchingGraph graph_from_normal_form(const NormalForm &nf);

} // namespace lcc
