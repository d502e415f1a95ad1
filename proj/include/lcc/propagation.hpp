#pragma once

#include "lcc/graph.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace lcc {

/// Vertex `label` entered the closure through edge `via`, whose endpoints
/// were both already reached.
struct Derivation {
  Vertex label = 0;
  Edge via;
};

/// Incremental closure R_G(S). Vertices are appended to members() in the
/// order they are reached; that list doubles as the propagation worklist.
/// An edge fires when its second endpoint is dequeued, so every edge is
/// inspected at most twice over the life of the state.
template <MatchingGraph G> class ClosureState {
public:
  static constexpr std::size_t unlimited = std::numeric_limits<std::size_t>::max();

  explicit ClosureState(const G &g, bool record = false)
      : g_(&g), reached_(g.vertex_count(), 0), record_(record) {}

  const G &graph() const { return *g_; }
  bool reached(Vertex v) const { return reached_[v] != 0; }
  std::size_t size() const { return members_.size(); }
  const std::vector<Vertex> &members() const { return members_; }
  const std::vector<std::uint8_t> &mask() const { return reached_; }
  const std::vector<Derivation> &derivations() const { return derivations_; }

  /// Adds v and propagates to the fixpoint; returns the number of vertices
  /// that became reached.
  std::size_t add(Vertex v) {
    check(v);
    if (reached_[v])
      return 0;
    const std::size_t before = members_.size();
    mark(v);
    propagate(before, unlimited);
    return members_.size() - before;
  }

  /// Marks every vertex of s before propagating, so no vertex of s is ever
  /// recorded as derived.
  std::size_t add_all(std::span<const Vertex> s) {
    const std::size_t before = members_.size();
    for (Vertex v : s) {
      check(v);
      if (!reached_[v])
        mark(v);
    }
    propagate(before, unlimited);
    return members_.size() - before;
  }

  /// |R(S + v)| - |R(S)| without changing the state. Counting may stop once
  /// the gain reaches `stop_at`, in which case the result is >= stop_at.
  std::size_t trial_gain(Vertex v, std::size_t stop_at = unlimited) {
    check(v);
    if (reached_[v])
      return 0;
    const std::size_t before = members_.size();
    const std::size_t derived_before = derivations_.size();
    mark(v);
    propagate(before, stop_at);
    const std::size_t gain = members_.size() - before;
    for (std::size_t k = before; k < members_.size(); ++k)
      reached_[members_[k]] = 0;
    members_.resize(before);
    derivations_.resize(derived_before);
    return gain;
  }

private:
  void check(Vertex v) const {
    if (v >= reached_.size() || !g_->contains(v))
      throw PreconditionError("vertex " + std::to_string(v) + " is not in the graph");
  }
  void mark(Vertex v) {
    reached_[v] = 1;
    members_.push_back(v);
  }
  void propagate(std::size_t from, std::size_t stop_at) {
    for (std::size_t head = from; head < members_.size(); ++head) {
      if (members_.size() - from >= stop_at)
        return;
      const Vertex u = members_[head];
      g_->for_each_incidence(u, [&](Vertex w, Vertex label) {
        if (reached_[w] && !reached_[label]) {
          mark(label);
          if (record_)
            derivations_.push_back({label, Edge(u, w)});
        }
      });
    }
  }

  const G *g_;
  std::vector<std::uint8_t> reached_;
  std::vector<Vertex> members_;
  std::vector<Derivation> derivations_;
  bool record_ = false;
};

/// R_G(S), sorted ascending.
template <MatchingGraph G> std::vector<Vertex> closure(const G &g, std::span<const Vertex> s) {
  ClosureState<G> st(g);
  for (Vertex v : s)
    st.add(v);
  std::vector<Vertex> out = st.members();
  std::sort(out.begin(), out.end());
  return out;
}

struct ClosureTrace {
  std::vector<Vertex> reached; // sorted
  std::vector<Derivation> order;
};

/// Closure together with the order in which non-seed vertices were derived.
/// All of s is seeded at once.
template <MatchingGraph G> ClosureTrace closure_with_provenance(const G &g, std::span<const Vertex> s) {
  ClosureState<G> st(g, true);
  st.add_all(s);
  ClosureTrace t{st.members(), st.derivations()};
  std::sort(t.reached.begin(), t.reached.end());
  return t;
}

/// For every vertex b outside R(S): the number of edges (b, w) with w in R(S)
/// and a label outside R(S). Adding b reaches 1 + gain[b] vertices in the
/// first propagation round. Entries for reached or inactive vertices are 0.
template <MatchingGraph G> std::vector<std::size_t> one_round_gains(const ClosureState<G> &st) {
  const G &g = st.graph();
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> gain(n, 0);
  std::size_t outside = 0;
  for (Vertex v = 0; v < n; ++v)
    outside += g.contains(v) && !st.reached(v);
  if (st.size() <= outside) {
    for (Vertex u : st.members())
      g.for_each_incidence(u, [&](Vertex w, Vertex label) {
        if (!st.reached(w) && !st.reached(label))
          ++gain[w];
      });
  } else {
    for (Vertex b = 0; b < n; ++b) {
      if (!g.contains(b) || st.reached(b))
        continue;
      std::size_t c = 0;
      g.for_each_incidence(b, [&](Vertex w, Vertex label) { c += st.reached(w) && !st.reached(label); });
      gain[b] = c;
    }
  }
  return gain;
}

inline constexpr double kSlack = 1e-9;

struct CleanupResult {
  std::vector<std::uint8_t> kept_mask;
  std::vector<Vertex> kept;    // ascending
  std::vector<Vertex> removed; // in removal order
  std::size_t initial_size = 0;
  double delta = 0;
  double threshold = 0; // delta^2 |V| / 4
  std::size_t min_degree = 0;
  std::size_t short_matchings = 0; // labels with fewer than 0.9 delta |V| edges
};

/// Repeatedly deletes a minimum-degree vertex (lowest index on ties) together
/// with every edge it labels, until all remaining degrees are at least
/// delta^2 |V| / 4. Degrees count only edges whose endpoints and label are
/// all still present.
template <MatchingGraph G> CleanupResult cleanup(const G &g, double delta) {
  if (!(delta > 0.0) || delta > 1.0)
    throw PreconditionError("cleanup: delta must lie in (0, 1]");
  const std::size_t n = g.vertex_count();
  CleanupResult res;
  res.delta = delta;
  res.kept_mask.assign(n, 0);
  auto &alive = res.kept_mask;
  for (Vertex v = 0; v < n; ++v)
    if (g.contains(v)) {
      alive[v] = 1;
      ++res.initial_size;
    }
  const double size = static_cast<double>(res.initial_size);
  res.threshold = delta * delta * size / 4;

  for (Vertex v = 0; v < n; ++v)
    if (alive[v] && static_cast<double>(matching_size(g, v)) < 0.9 * delta * size - kSlack)
      ++res.short_matchings;
  if (static_cast<double>(res.short_matchings) > 0.1 * delta * size + kSlack)
    throw PreconditionError("cleanup: " + std::to_string(res.short_matchings) +
                            " matchings have fewer than 0.9 delta |V| edges (allowed " +
                            std::to_string(0.1 * delta * size) + ")");

  std::vector<std::size_t> deg(n, 0);
  std::set<std::pair<std::size_t, Vertex>> order;
  for (Vertex v = 0; v < n; ++v)
    if (alive[v]) {
      deg[v] = degree(g, v);
      order.emplace(deg[v], v);
    }
  auto drop = [&](Vertex w) {
    order.erase({deg[w], w});
    --deg[w];
    order.emplace(deg[w], w);
  };
  std::size_t alive_count = res.initial_size;
  while (!order.empty() && static_cast<double>(order.begin()->first) < res.threshold - kSlack) {
    const Vertex v = order.begin()->second;
    order.erase(order.begin());
    alive[v] = 0;
    --alive_count;
    res.removed.push_back(v);
    g.for_each_incidence(v, [&](Vertex w, Vertex label) {
      if (alive[w] && alive[label])
        drop(w);
    });
    g.for_each_edge(v, [&](Vertex a, Vertex b) {
      if (alive[a] && alive[b]) {
        drop(a);
        drop(b);
      }
    });
    if (static_cast<double>(alive_count) < delta * size - kSlack)
      throw InvariantError("cleanup: fewer than delta |V| vertices remain (" + std::to_string(alive_count) +
                           " of " + std::to_string(res.initial_size) + ")");
  }
  res.min_degree = order.empty() ? 0 : order.begin()->first;
  for (Vertex v = 0; v < n; ++v)
    if (alive[v])
      res.kept.push_back(v);
  return res;
}

struct GrowResult {
  std::vector<Vertex> seed;
  std::size_t reached = 0;
  std::size_t min_degree = 0;
  std::size_t vertex_count = 0;
  /// c with |S| - 1 = c (|V| / d) ln |V|.
  double achieved_constant = 0;
};

/// Grows a seed from the lowest active vertex, each step adding the outside
/// vertex with the largest one-round gain (lowest index on ties), until
/// |R(S)| >= d / 2.
template <MatchingGraph G> GrowResult grow_seed(const G &g, std::size_t d) {
  const std::size_t n = g.vertex_count();
  GrowResult res;
  res.min_degree = d;
  std::optional<Vertex> first;
  for (Vertex v = 0; v < n; ++v) {
    if (!g.contains(v))
      continue;
    ++res.vertex_count;
    if (!first)
      first = v;
    const std::size_t dv = degree(g, v);
    if (dv < d)
      throw PreconditionError("grow_seed: vertex " + std::to_string(v) + " has degree " + std::to_string(dv) +
                              " < " + std::to_string(d));
  }
  if (!first)
    throw PreconditionError("grow_seed: empty graph");
  ClosureState<G> st(g);
  res.seed.push_back(*first);
  st.add(*first);
  while (2 * st.size() < d) {
    const auto gain = one_round_gains(st);
    std::optional<Vertex> best;
    for (Vertex b = 0; b < n; ++b)
      if (g.contains(b) && !st.reached(b) && (!best || gain[b] > gain[*best]))
        best = b;
    if (!best)
      break;
    res.seed.push_back(*best);
    st.add(*best);
  }
  res.reached = st.size();
  if (res.vertex_count > 1 && d > 0) {
    const double vc = static_cast<double>(res.vertex_count);
    res.achieved_constant =
        static_cast<double>(res.seed.size() - 1) / ((vc / static_cast<double>(d)) * std::log(vc));
  }
  return res;
}

struct NearCoverResult {
  std::size_t closure_size = 0;
  bool above_threshold = false; // |R(S)| > (1 - delta) n
  bool covers_all = false;      // R(S) = V

  /// The near-cover property: above the threshold implies full cover.
  bool holds() const { return !above_threshold || covers_all; }
  bool value() const { return above_threshold && covers_all; }
};

/// Requires every matching to have at least delta n edges.
template <MatchingGraph G>
NearCoverResult check_near_cover(const G &g, std::span<const Vertex> s, std::optional<double> delta = {}) {
  const double d = delta.value_or(g.delta());
  const std::size_t n = g.vertex_count();
  for (Vertex v = 0; v < n; ++v)
    if (static_cast<double>(matching_size(g, v)) < d * static_cast<double>(n) - kSlack)
      throw PreconditionError("check_near_cover: matching " + std::to_string(v) + " has fewer than delta n edges");
  NearCoverResult r;
  r.closure_size = closure(g, s).size();
  r.above_threshold = static_cast<double>(r.closure_size) > (1 - d) * static_cast<double>(n) + kSlack;
  r.covers_all = r.closure_size == n;
  return r;
}

enum class SeedStepKind { init, case1, cleanup_grow };

std::string to_string(SeedStepKind kind);

struct SeedStep {
  SeedStepKind kind = SeedStepKind::init;
  std::vector<Vertex> added;
  std::size_t reached_after = 0;
  std::size_t subgraph_size = 0; // |V'| before cleanup (case 2)
  std::size_t cleanup_removed = 0;
  std::size_t min_degree = 0;
  double grow_constant = 0;
};

struct SeedTrace {
  std::size_t n = 0;
  double delta = 0;
  std::vector<Vertex> t1;
  std::vector<Vertex> seed;
  std::vector<Vertex> reached; // final R(S) in the augmented graph, sorted
  std::vector<SeedStep> steps;
  std::size_t case1 = 0;
  std::size_t case2 = 0;
  std::size_t phase_limit = 0;
  bool covers = false; // R_G(S + T1) = V on the input graph

  std::size_t phases() const { return case1 + case2; }
  /// C with phases = C / delta^2.
  double phase_constant() const { return static_cast<double>(phases()) * delta * delta; }
};

struct FindSeedOptions {
  std::optional<double> delta; // defaults to the graph's delta
  std::size_t phase_limit = 0; // 0: ceil(100 / delta^2)
};

/// Seed search: T1 labels get dummy matchings and T1 is reached up front, then
/// until R(S + T1) = V either add a vertex gaining >= 0.01 delta^2 n (case 1), or clean up the unreached
/// part and grow a sub-seed inside it (case 2).
template <MatchingGraph G>
SeedTrace find_seed(const G &g, std::span<const Vertex> t1, const FindSeedOptions &opts = {}) {
  const std::size_t n = g.vertex_count();
  const double delta = opts.delta.value_or(g.delta());
  if (!(delta > 0.0) || delta > 1.0)
    throw PreconditionError("find_seed: delta must lie in (0, 1]");
  for (Vertex v = 0; v < n; ++v)
    if (!g.contains(v))
      throw PreconditionError("find_seed: input must be a full graph");

  SeedTrace tr;
  tr.n = n;
  tr.delta = delta;
  tr.t1.assign(t1.begin(), t1.end());
  std::sort(tr.t1.begin(), tr.t1.end());
  tr.t1.erase(std::unique(tr.t1.begin(), tr.t1.end()), tr.t1.end());
  tr.phase_limit = opts.phase_limit ? opts.phase_limit : static_cast<std::size_t>(std::ceil(100 / (delta * delta)));

  const double dn = delta * static_cast<double>(n);
  DummyAugmented<G> aug(g, tr.t1, delta);
  for (Vertex v = 0; v < n; ++v) {
    const std::size_t s = matching_size(aug, v);
    if (static_cast<double>(s) < dn - kSlack)
      throw PreconditionError("find_seed: matching " + std::to_string(v) + " has " + std::to_string(s) +
                              " edges, fewer than delta n = " + std::to_string(dn));
  }

  // T1 symbols come from sampling, so the search starts from R(T1)
  ClosureState<DummyAugmented<G>> st(aug);
  st.add_all(tr.t1);
  tr.steps.push_back({SeedStepKind::init, tr.t1, st.size()});
  const double case1_threshold = 0.01 * delta * delta * static_cast<double>(n);
  const auto case1_stop = static_cast<std::size_t>(std::ceil(case1_threshold - kSlack));

  while (st.size() < n) {
    if (tr.phases() >= tr.phase_limit)
      throw InvariantError("find_seed: exceeded " + std::to_string(tr.phase_limit) + " phases with |R(S)| = " +
                           std::to_string(st.size()) + " of " + std::to_string(n) +
                           "; the input does not behave like a code-derived instance");

    const auto gain = one_round_gains(st);
    std::vector<Vertex> candidates;
    for (Vertex b = 0; b < n; ++b)
      if (!st.reached(b))
        candidates.push_back(b);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](Vertex a, Vertex b) { return gain[a] > gain[b]; });
    std::optional<Vertex> pick;
    for (Vertex b : candidates) {
      if (static_cast<double>(1 + gain[b]) >= case1_threshold - kSlack ||
          static_cast<double>(st.trial_gain(b, case1_stop)) >= case1_threshold - kSlack) {
        pick = b;
        break;
      }
    }

    if (pick) {
      const std::size_t before = st.size();
      st.add(*pick);
      if (static_cast<double>(st.size() - before) < case1_threshold - kSlack)
        throw InvariantError("find_seed: case-1 gain below 0.01 delta^2 n");
      tr.seed.push_back(*pick);
      ++tr.case1;
      tr.steps.push_back({SeedStepKind::case1, {*pick}, st.size()});
      continue;
    }

    // case 2: every outside vertex gains little, so V' = V \ R(S) is nearly closed
    std::vector<std::uint8_t> outside(n, 0);
    std::size_t vp = 0;
    for (Vertex v = 0; v < n; ++v)
      if (!st.reached(v)) {
        outside[v] = 1;
        ++vp;
      }
    if (static_cast<double>(vp) < dn - kSlack)
      throw InvariantError("find_seed: |V \\ R(S)| = " + std::to_string(vp) + " < delta n although R(S) != V");
    SubgraphView<DummyAugmented<G>> sub(aug, std::move(outside));
    std::size_t short_count = 0;
    for (Vertex v = 0; v < n; ++v)
      if (sub.contains(v) && static_cast<double>(matching_size(sub, v)) < 0.9 * dn - kSlack)
        ++short_count;
    if (static_cast<double>(short_count) > 0.1 * delta * static_cast<double>(vp) + kSlack)
      throw InvariantError("find_seed: " + std::to_string(short_count) +
                           " matchings inside V \\ R(S) have fewer than 0.9 delta n edges");

    const double delta_sub = std::min(1.0, dn / static_cast<double>(vp));
    const CleanupResult cl = cleanup(sub, delta_sub);
    SubgraphView<DummyAugmented<G>> core(aug, cl.kept_mask);
    const GrowResult gr = grow_seed(core, cl.min_degree);

    const std::size_t before = st.size();
    std::vector<Vertex> added;
    for (Vertex v : gr.seed)
      if (!st.reached(v)) {
        st.add(v);
        added.push_back(v);
      }
    const std::size_t gained = st.size() - before;
    if (2 * gained < cl.min_degree || gained == 0)
      throw InvariantError("find_seed: case-2 phase gained " + std::to_string(gained) + " < d/2");
    tr.seed.insert(tr.seed.end(), added.begin(), added.end());
    ++tr.case2;
    SeedStep step{SeedStepKind::cleanup_grow, std::move(added), st.size()};
    step.subgraph_size = vp;
    step.cleanup_removed = cl.removed.size();
    step.min_degree = cl.min_degree;
    step.grow_constant = gr.achieved_constant;
    tr.steps.push_back(std::move(step));
  }

  tr.reached = st.members();
  std::sort(tr.reached.begin(), tr.reached.end());
  std::vector<Vertex> full = tr.seed;
  full.insert(full.end(), tr.t1.begin(), tr.t1.end());
  tr.covers = closure(g, full).size() == n;
  if (!tr.covers)
    throw InvariantError("find_seed: R(S + T1) != V on the input graph");
  return tr;
}

} // namespace lcc
