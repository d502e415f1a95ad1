#include "lcc/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace lcc {

TableCode TableCode::from(const StackedHadamardCode &code) {
  return TableCode{code.length(), code.symbol_bits(), code.enumerate()};
}

QuerySpec::QuerySpec(std::size_t n, unsigned bits, PairSource pairs, Decision decide)
    : n_(n), bits_(bits), pairs_(std::move(pairs)),
      decide_(std::make_shared<const Decision>(std::move(decide))) {}

QuerySpec QuerySpec::from_lists(std::size_t n, unsigned bits, std::vector<std::vector<WeightedPair>> lists,
                                Decision decide) {
  if (lists.size() != n)
    throw PreconditionError("query spec needs one distribution per coordinate");
  auto shared = std::make_shared<const std::vector<std::vector<WeightedPair>>>(std::move(lists));
  return QuerySpec(
      n, bits, [shared](Position i) { return (*shared)[i]; }, std::move(decide));
}

QuerySpec hadamard_query_spec(const StackedHadamardCode &code) {
  const CodeParams p = code.params();
  auto pairs = [p](Position a) {
    const Position base = static_cast<Position>(p.block_of(a) * p.m);
    const Position local = p.local_of(a);
    std::vector<WeightedPair> out;
    const auto m = static_cast<std::int64_t>(p.m);
    if (local == 0) {
      out.reserve(p.m);
      for (Position xi = 0; xi < p.m; ++xi)
        out.push_back({Edge(base + xi, base + xi), Rational(1, m)});
      return out;
    }
    out.reserve(p.m / 2);
    for (Position xi = 0; xi < p.m; ++xi)
      if (xi < (local ^ xi))
        out.push_back({Edge(base + xi, base + (local ^ xi)), Rational(2, m)});
    return out;
  };
  auto decide = [](Position, Edge, Symbol at_u, Symbol at_v) { return at_u ^ at_v; };
  return QuerySpec(p.n, p.b, pairs, decide);
}

// ---------------------------------------------------------------------------

Rational SmoothOneQueryCorrector::probability(Position v) const {
  const auto *e = entry(v);
  return e ? e->p : Rational(0);
}

const OneQueryEntry *SmoothOneQueryCorrector::entry(Position v) const {
  auto it = std::lower_bound(dist.begin(), dist.end(), v,
                             [](const OneQueryEntry &e, Position x) { return e.v < x; });
  return (it != dist.end() && it->v == v) ? &*it : nullptr;
}

bool SmoothOneQueryCorrector::is_excluded(Position v) const {
  return std::binary_search(excluded.begin(), excluded.end(), v);
}

SymbolDistribution SmoothOneQueryCorrector::output_distribution(std::optional<Position> v, Symbol z) const {
  const std::vector<OneQueryBranch> *branches = &phi_branches;
  Rational total = p_phi;
  if (v) {
    const auto *e = entry(*v);
    if (!e)
      return {};
    branches = &e->branches;
    total = e->p;
  }
  if (total == Rational(0))
    return {};
  std::map<Symbol, Rational> acc;
  for (const auto &br : *branches) {
    const Symbol at_u = is_excluded(br.pair.u) ? 0 : z;
    const Symbol at_v = is_excluded(br.pair.v) ? 0 : z;
    acc[(*decide)(i, br.pair, at_u, at_v)] += br.weight;
  }
  SymbolDistribution out;
  for (auto &[sym, w] : acc)
    out.emplace_back(sym, w / total);
  return out;
}

Rational SmoothOneQueryCorrector::success_probability(const Word &c) const {
  Rational hit(0);
  for (const auto &br : phi_branches)
    if ((*decide)(i, br.pair, 0, 0) == c[i])
      hit += br.weight;
  for (const auto &e : dist) {
    const Symbol z = c[e.v];
    for (const auto &br : e.branches) {
      const Symbol at_u = is_excluded(br.pair.u) ? 0 : z;
      const Symbol at_v = is_excluded(br.pair.v) ? 0 : z;
      if ((*decide)(i, br.pair, at_u, at_v) == c[i])
        hit += br.weight;
    }
  }
  return hit;
}

Symbol MatchingEntry::recover(std::size_t edge_index, Symbol at_u, Symbol at_v) const {
  if (rule == RecoveryRule::xor_symbols)
    return at_u ^ at_v;
  return tables.at(edge_index).at(at_u, at_v);
}

std::optional<std::size_t> MatchingEntry::edge_index(Edge e) const {
  auto it = std::lower_bound(edges.begin(), edges.end(), e);
  if (it == edges.end() || *it != e)
    return std::nullopt;
  return static_cast<std::size_t>(it - edges.begin());
}

std::vector<Position> NormalForm::t1_positions() const {
  std::vector<Position> out;
  for (const auto &e : t1)
    out.push_back(e.i);
  return out;
}

std::vector<Position> NormalForm::t2_positions() const {
  std::vector<Position> out;
  for (const auto &e : t2)
    out.push_back(e.i);
  return out;
}

const SmoothOneQueryCorrector *NormalForm::t1_entry(Position i) const {
  auto it = std::lower_bound(t1.begin(), t1.end(), i,
                             [](const SmoothOneQueryCorrector &e, Position x) { return e.i < x; });
  return (it != t1.end() && it->i == i) ? &*it : nullptr;
}

const MatchingEntry *NormalForm::t2_entry(Position i) const {
  auto it =
      std::lower_bound(t2.begin(), t2.end(), i, [](const MatchingEntry &e, Position x) { return e.i < x; });
  return (it != t2.end() && it->i == i) ? &*it : nullptr;
}

ZeroErrorViolation::ZeroErrorViolation(Position i, Edge e, std::size_t first, std::size_t second)
    : std::runtime_error("zero-error violation at coordinate " + std::to_string(i) + " on edge (" +
                         std::to_string(e.u) + "," + std::to_string(e.v) + "): codewords " +
                         std::to_string(first) + " and " + std::to_string(second) +
                         " agree on the edge but differ at the coordinate"),
      coordinate(i), edge(e), first_codeword(first), second_codeword(second) {}

std::vector<Edge> greedy_maximal_matching(std::vector<Edge> edges, std::optional<Vertex> avoid) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  Vertex max_vertex = 0;
  for (const auto &e : edges)
    max_vertex = std::max(max_vertex, e.v);
  std::vector<std::uint8_t> used(edges.empty() ? 0 : max_vertex + 1, 0);
  std::vector<Edge> matching;
  for (const auto &e : edges) {
    if (e.u == e.v || (avoid && e.touches(*avoid)))
      continue;
    if (used[e.u] || used[e.v])
      continue;
    used[e.u] = used[e.v] = 1;
    matching.push_back(e);
  }
  return matching;
}

// ---------------------------------------------------------------------------

namespace {

using EdgeFinalizer = std::function<void(MatchingEntry &)>;

struct Support {
  std::vector<WeightedPair> pairs; // merged, sorted by pair
};

Support checked_support(const QuerySpec &spec, Position i) {
  auto raw = spec.pairs(i);
  std::sort(raw.begin(), raw.end(), [](const WeightedPair &a, const WeightedPair &b) { return a.pair < b.pair; });
  Support s;
  Rational total(0);
  for (const auto &wp : raw) {
    if (wp.pair.v >= spec.n())
      throw PreconditionError("query pair out of range at coordinate " + std::to_string(i));
    if (wp.weight < Rational(0))
      throw PreconditionError("negative query weight at coordinate " + std::to_string(i));
    total += wp.weight;
    if (wp.weight == Rational(0))
      continue;
    if (!s.pairs.empty() && s.pairs.back().pair == wp.pair)
      s.pairs.back().weight += wp.weight;
    else
      s.pairs.push_back(wp);
  }
  if (total != Rational(1))
    throw PreconditionError("query weights at coordinate " + std::to_string(i) + " sum to " + total.str());
  return s;
}

SmoothOneQueryCorrector build_one_query(const QuerySpec &spec, Position i, const Support &support,
                                        const std::vector<Edge> &matching, double epsilon) {
  const std::size_t n = spec.n();
  SmoothOneQueryCorrector out;
  out.i = i;
  out.decide = spec.decision();

  // Vertex cover of the support: matching endpoints, plus i for edges at i the
  // matching skipped. Redundant cover vertices are then pruned in index order.
  std::vector<std::uint8_t> in_cover(n, 0);
  for (const auto &e : matching)
    in_cover[e.u] = in_cover[e.v] = 1;
  for (const auto &wp : support.pairs)
    if (wp.pair.u != wp.pair.v && !in_cover[wp.pair.u] && !in_cover[wp.pair.v])
      in_cover[i] = 1;
  std::vector<Vertex> cover_list;
  for (Vertex v = 0; v < n; ++v)
    if (in_cover[v])
      cover_list.push_back(v);
  for (Vertex x : cover_list) {
    bool removable = true;
    for (const auto &wp : support.pairs) {
      if (wp.pair.u == wp.pair.v || !wp.pair.touches(x))
        continue;
      const Vertex other = wp.pair.u == x ? wp.pair.v : wp.pair.u;
      if (!in_cover[other]) {
        removable = false;
        break;
      }
    }
    if (removable)
      in_cover[x] = 0;
  }
  for (Vertex v = 0; v < n; ++v)
    if (in_cover[v])
      out.vertex_cover.push_back(v);

  // Heavy positions: queried with probability >= 1 / (epsilon n).
  std::map<Position, Rational> query_prob;
  for (const auto &wp : support.pairs) {
    query_prob[wp.pair.u] += wp.weight;
    if (wp.pair.v != wp.pair.u)
      query_prob[wp.pair.v] += wp.weight;
  }
  const double heavy_scale = epsilon * static_cast<double>(n);
  for (const auto &[v, q] : query_prob)
    if (q.to_double() * heavy_scale >= 1.0 - 1e-12)
      out.heavy.push_back(v);
  if (static_cast<double>(out.heavy.size()) > 2.0 * heavy_scale + 1e-9)
    throw InvariantError("more than 2 epsilon n heavy positions at coordinate " + std::to_string(i));

  std::set_union(out.vertex_cover.begin(), out.vertex_cover.end(), out.heavy.begin(), out.heavy.end(),
                 std::back_inserter(out.excluded));

  std::map<Position, OneQueryEntry> entries;
  for (const auto &wp : support.pairs) {
    const bool keep_u = !out.is_excluded(wp.pair.u);
    const bool keep_v = !out.is_excluded(wp.pair.v);
    if (keep_u && keep_v && wp.pair.u != wp.pair.v)
      throw InvariantError("vertex cover misses a support edge at coordinate " + std::to_string(i));
    if (!keep_u && !keep_v) {
      out.p_phi += wp.weight;
      out.phi_branches.push_back({wp.pair, wp.weight});
      continue;
    }
    const Position q = keep_u ? wp.pair.u : wp.pair.v;
    auto &e = entries[q];
    e.v = q;
    e.p += wp.weight;
    e.branches.push_back({wp.pair, wp.weight});
  }
  for (auto &[v, e] : entries)
    out.dist.push_back(std::move(e));
  return out;
}

NormalForm extract_core(const QuerySpec &spec, double tau, const EdgeFinalizer &finalize) {
  if (!(tau > 0.0) || tau > 1.0)
    throw PreconditionError("tau must lie in (0, 1]");
  const std::size_t n = spec.n();
  if (n == 0)
    throw PreconditionError("empty code");
  NormalForm nf;
  nf.n = n;
  nf.bits = spec.bits();
  nf.tau = tau;
  nf.epsilon = tau / 4;
  nf.smoothness_vacuous = tau * static_cast<double>(n) < 4.0;
  nf.in_t1.assign(n, 0);
  const double target = nf.epsilon * static_cast<double>(n);
  const auto trimmed_size = static_cast<std::size_t>(std::ceil(target - 1e-9));

  for (Position i = 0; i < n; ++i) {
    Support support = checked_support(spec, i);
    std::vector<Edge> edges;
    edges.reserve(support.pairs.size());
    for (const auto &wp : support.pairs)
      edges.push_back(wp.pair);
    auto matching = greedy_maximal_matching(edges, i);
    if (static_cast<double>(matching.size()) >= target - 1e-9) {
      MatchingEntry entry;
      entry.i = i;
      entry.untrimmed = matching;
      entry.edges.assign(matching.begin(), matching.begin() + static_cast<std::ptrdiff_t>(trimmed_size));
      finalize(entry);
      nf.t2.push_back(std::move(entry));
    } else {
      nf.in_t1[i] = 1;
      nf.t1.push_back(build_one_query(spec, i, support, matching, nf.epsilon));
    }
  }
  return nf;
}

} // namespace

NormalForm extract_normal_form(const QuerySpec &spec, const StackedHadamardCode &code, double tau) {
  if (spec.n() != code.length())
    throw PreconditionError("query spec and code disagree on n");
  return extract_core(spec, tau, [](MatchingEntry &e) { e.rule = RecoveryRule::xor_symbols; });
}

NormalForm extract_normal_form(const QuerySpec &spec, const TableCode &code, double tau) {
  if (spec.n() != code.n)
    throw PreconditionError("query spec and code disagree on n");
  if (code.bits > 8)
    throw PreconditionError("recovery tables need symbols of at most 8 bits");
  auto finalize = [&code](MatchingEntry &e) {
    e.rule = RecoveryRule::table;
    const std::size_t cells = std::size_t{1} << (2 * code.bits);
    for (const auto &edge : e.edges) {
      RecoveryTable t{code.bits, std::vector<Symbol>(cells, 0), std::vector<std::uint8_t>(cells, 0)};
      std::vector<std::size_t> setter(cells, 0);
      for (std::size_t idx = 0; idx < code.codewords.size(); ++idx) {
        const Word &c = code.codewords[idx];
        const std::size_t key = (static_cast<std::size_t>(c[edge.u]) << code.bits) | c[edge.v];
        if (t.constrained[key] && t.cells[key] != c[e.i])
          throw ZeroErrorViolation(e.i, edge, setter[key], idx);
        t.cells[key] = c[e.i];
        t.constrained[key] = 1;
        setter[key] = idx;
      }
      e.tables.push_back(std::move(t));
    }
  };
  return extract_core(spec, tau, finalize);
}

// ---------------------------------------------------------------------------

namespace {

const Rational kTwoThirds(2, 3);

void check_codeword(const NormalForm &nf, const Word &c, std::size_t idx, ValidationReport &report,
                    std::size_t max_failures) {
  for (const auto &e : nf.t2) {
    for (std::size_t k = 0; k < e.edges.size(); ++k) {
      const Edge &edge = e.edges[k];
      const Symbol got = e.recover(k, c[edge.u], c[edge.v]);
      if (got != c[e.i]) {
        report.passed = false;
        if (report.t2_failures.size() < max_failures)
          report.t2_failures.push_back({e.i, edge, idx, c[e.i], got});
      }
    }
  }
  for (const auto &t : nf.t1) {
    const Rational s = t.success_probability(c);
    if (s < report.min_t1_success)
      report.min_t1_success = s;
    if (s < kTwoThirds) {
      report.passed = false;
      if (report.t1_failures.size() < max_failures)
        report.t1_failures.push_back({t.i, idx, s});
    }
  }
  ++report.codewords_checked;
}

} // namespace

ValidationReport validate_zero_error(const NormalForm &nf, const TableCode &code, std::size_t max_failures) {
  if (code.n != nf.n)
    throw PreconditionError("normal form and code disagree on n");
  ValidationReport report;
  for (std::size_t idx = 0; idx < code.codewords.size(); ++idx)
    check_codeword(nf, code.codewords[idx], idx, report, max_failures);
  return report;
}

ValidationReport validate_zero_error(const NormalForm &nf, const StackedHadamardCode &code, std::size_t samples,
                                     std::uint64_t seed, std::size_t max_failures) {
  if (code.length() != nf.n)
    throw PreconditionError("normal form and code disagree on n");
  ValidationReport report;
  const unsigned k = code.params().k;
  if (k <= 20) {
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << k); ++x)
      check_codeword(nf, code.encode_index(x), x, report, max_failures);
    return report;
  }
  report.sampled = true;
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    Message m = Message::random(k, rng);
    check_codeword(nf, code.encode(m), s, report, max_failures);
  }
  return report;
}

SmoothnessMargin smoothness_margin(const NormalForm &nf) {
  SmoothnessMargin best;
  const double scale = nf.tau * static_cast<double>(nf.n) / 4.0;
  for (const auto &t : nf.t1) {
    for (const auto &e : t.dist) {
      const double m = e.p.to_double() * scale;
      if (m > best.margin) {
        best = {m, t.i, e.v};
      }
    }
  }
  return best;
}

} // namespace lcc
