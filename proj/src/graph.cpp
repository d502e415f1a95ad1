#include "lcc/graph.hpp"

#include "lcc/normal_form.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace lcc {

LabeledMatchingGraph::LabeledMatchingGraph(std::size_t n, double delta, std::vector<std::vector<Edge>> matchings)
    : n_(n), delta_(delta), matchings_(std::move(matchings)) {
  if (matchings_.size() != n)
    throw PreconditionError("expected one matching per label");
  if (!(delta >= 0.0) || delta > 1.0)
    throw PreconditionError("delta must lie in [0, 1]");
  if (n > std::numeric_limits<Vertex>::max())
    throw PreconditionError("too many vertices");
  std::vector<std::uint32_t> stamp(n, std::numeric_limits<std::uint32_t>::max());
  std::vector<std::size_t> deg(n, 0);
  for (Vertex label = 0; label < n; ++label) {
    for (const auto &e : matchings_[label]) {
      if (e.v >= n)
        throw PreconditionError("edge endpoint out of range in matching " + std::to_string(label));
      if (e.u == e.v)
        throw PreconditionError("self-loop in matching " + std::to_string(label));
      if (e.touches(label))
        throw PreconditionError("matching " + std::to_string(label) + " touches its own label");
      if (stamp[e.u] == label || stamp[e.v] == label)
        throw PreconditionError("matching " + std::to_string(label) + " is not vertex-disjoint");
      stamp[e.u] = stamp[e.v] = label;
      ++deg[e.u];
      ++deg[e.v];
    }
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v)
    offsets_[v + 1] = offsets_[v] + deg[v];
  incidences_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (Vertex label = 0; label < n; ++label)
    for (const auto &e : matchings_[label]) {
      incidences_[fill[e.u]++] = {e.v, label};
      incidences_[fill[e.v]++] = {e.u, label};
    }
}

HadamardGraph::HadamardGraph(std::size_t n) : n_(n) {
  if (n < 4 || !std::has_single_bit(n))
    throw PreconditionError("n must be a power of two (at least 4)");
  if (n > (std::size_t{1} << 30))
    throw PreconditionError("n too large");
}

PerfectGraph::PerfectGraph(std::size_t n) : n_(n) {
  if (n < 4 || n % 2 != 0)
    throw PreconditionError("perfect family needs an even n >= 4");
  if (n > (std::size_t{1} << 30))
    throw PreconditionError("n too large");
}

std::vector<Edge> dummy_matching(std::size_t n, Vertex label, std::size_t size) {
  if (2 * size > n - 1)
    throw PreconditionError("dummy matching of " + std::to_string(size) + " edges does not fit in n = " +
                            std::to_string(n));
  std::vector<Edge> out;
  out.reserve(size);
  for (std::size_t t = 0; t < size; ++t)
    out.emplace_back(static_cast<Vertex>((label + 1 + 2 * t) % n), static_cast<Vertex>((label + 2 + 2 * t) % n));
  std::sort(out.begin(), out.end());
  return out;
}

InstanceKind parse_instance_kind(const std::string &name) {
  if (name == "hadamard")
    return InstanceKind::hadamard;
  if (name == "random")
    return InstanceKind::random;
  if (name == "concat")
    return InstanceKind::concat;
  if (name == "perfect")
    return InstanceKind::perfect;
  throw PreconditionError("unknown instance kind '" + name + "'");
}

std::string to_string(InstanceKind kind) {
  switch (kind) {
  case InstanceKind::hadamard:
    return "hadamard";
  case InstanceKind::random:
    return "random";
  case InstanceKind::concat:
    return "concat";
  case InstanceKind::perfect:
    return "perfect";
  }
  return "?";
}

std::vector<Edge> random_matching(std::size_t n, Vertex label, std::size_t size, Rng &rng) {
  if (n < 1 || 2 * size > n - 1)
    throw PreconditionError("matching of " + std::to_string(size) + " edges does not fit in n = " + std::to_string(n));
  std::vector<Vertex> pool;
  pool.reserve(n - 1);
  for (Vertex v = 0; v < n; ++v)
    if (v != label)
      pool.push_back(v);
  // partial Fisher-Yates over the first 2 * size slots
  for (std::size_t i = 0; i < 2 * size; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  std::vector<Edge> out;
  out.reserve(size);
  for (std::size_t t = 0; t < size; ++t)
    out.emplace_back(pool[2 * t], pool[2 * t + 1]);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::size_t edges_for(double delta, std::size_t n) {
  if (!(delta > 0.0) || delta > 1.0)
    throw PreconditionError("delta must lie in (0, 1]");
  const auto s = static_cast<std::size_t>(std::ceil(delta * static_cast<double>(n) - 1e-9));
  if (s == 0)
    throw PreconditionError("delta * n must be at least 1");
  if (2 * s > n - 1)
    throw PreconditionError("ceil(delta n) edges avoiding the label need 2 ceil(delta n) <= n - 1");
  return s;
}

} // namespace

LabeledMatchingGraph gen_instance(InstanceKind kind, const InstanceParams &params, std::uint64_t rng_seed) {
  const std::size_t n = params.n;
  switch (kind) {
  case InstanceKind::hadamard:
    return materialize(HadamardGraph(n));
  case InstanceKind::perfect:
    return materialize(PerfectGraph(n));
  case InstanceKind::random: {
    if (n < 3)
      throw PreconditionError("n must be at least 3");
    const std::size_t s = edges_for(params.delta, n);
    Rng rng(rng_seed);
    std::vector<std::vector<Edge>> matchings(n);
    for (Vertex label = 0; label < n; ++label)
      matchings[label] = random_matching(n, label, s, rng);
    return LabeledMatchingGraph(n, params.delta, std::move(matchings));
  }
  case InstanceKind::concat: {
    if (n < 6 || n % 2 != 0)
      throw PreconditionError("concat needs an even n >= 6");
    const std::size_t half = n / 2;
    const std::size_t s = edges_for(params.delta, half);
    Rng rng(rng_seed);
    std::vector<std::vector<Edge>> matchings(n);
    for (std::size_t part = 0; part < 2; ++part) {
      const auto shift = static_cast<Vertex>(part * half);
      for (Vertex label = 0; label < half; ++label) {
        auto local = random_matching(half, label, s, rng);
        for (auto &e : local)
          e = Edge(e.u + shift, e.v + shift);
        matchings[label + shift] = std::move(local);
      }
    }
    return LabeledMatchingGraph(n, static_cast<double>(s) / static_cast<double>(n), std::move(matchings));
  }
  }
  throw PreconditionError("unknown instance kind");
}

LabeledMatchingGraph graph_from_normal_form(const NormalForm &nf) {
  std::vector<std::vector<Edge>> matchings(nf.n);
  for (const auto &entry : nf.t2)
    matchings[entry.i] = entry.edges;
  return LabeledMatchingGraph(nf.n, nf.epsilon, std::move(matchings));
}

} // namespace lcc
