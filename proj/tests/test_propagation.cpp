#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lcc/graph.hpp"
#include "lcc/normal_form.hpp"
#include "lcc/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace lcc;

namespace {

using Matchings = std::vector<std::vector<Edge>>;

// fixpoint by rescanning every labeled edge until nothing changes
std::vector<Vertex> scan_closure(std::size_t n, const Matchings &m, const std::vector<Vertex> &s) {
  std::vector<std::uint8_t> in(n, 0);
  for (Vertex v : s)
    in[v] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (Vertex label = 0; label < n; ++label) {
      if (in[label])
        continue;
      for (const auto &e : m[label])
        if (in[e.u] && in[e.v]) {
          in[label] = 1;
          changed = true;
          break;
        }
    }
  }
  std::vector<Vertex> out;
  for (Vertex v = 0; v < n; ++v)
    if (in[v])
      out.push_back(v);
  return out;
}

LabeledMatchingGraph random_graph(std::size_t n, Rng &rng, std::size_t max_size) {
  Matchings m(n);
  for (Vertex label = 0; label < n; ++label)
    m[label] = random_matching(n, label, rng() % (max_size + 1), rng);
  return LabeledMatchingGraph(n, 0, m);
}

std::vector<Vertex> random_subset(std::size_t n, std::size_t size, Rng &rng) {
  std::vector<Vertex> all(n);
  for (Vertex v = 0; v < n; ++v)
    all[v] = v;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(size);
  return all;
}

struct RefCleanup {
  std::vector<Vertex> removed;
  std::vector<Vertex> kept;
  std::size_t min_degree = 0;
};

// recomputes every degree from scratch after each removal
RefCleanup rescan_cleanup(const LabeledMatchingGraph &g, double delta) {
  const std::size_t n = g.vertex_count();
  std::vector<std::uint8_t> alive(n, 1);
  const double threshold = delta * delta * static_cast<double>(n) / 4;
  RefCleanup out;
  for (;;) {
    std::vector<std::size_t> deg(n, 0);
    for (Vertex label = 0; label < n; ++label)
      if (alive[label])
        for (const auto &e : g.matching(label))
          if (alive[e.u] && alive[e.v]) {
            ++deg[e.u];
            ++deg[e.v];
          }
    std::optional<Vertex> worst;
    for (Vertex v = 0; v < n; ++v)
      if (alive[v] && (!worst || deg[v] < deg[*worst]))
        worst = v;
    if (!worst)
      break;
    if (static_cast<double>(deg[*worst]) >= threshold - 1e-9) {
      out.min_degree = deg[*worst];
      break;
    }
    alive[*worst] = 0;
    out.removed.push_back(*worst);
  }
  for (Vertex v = 0; v < n; ++v)
    if (alive[v])
      out.kept.push_back(v);
  return out;
}

// edges (b, w) with w reached and label not reached, by definition
std::size_t ref_gain(const LabeledMatchingGraph &g, const std::vector<std::uint8_t> &in, Vertex b) {
  std::size_t c = 0;
  for (Vertex label = 0; label < g.vertex_count(); ++label) {
    if (in[label])
      continue;
    for (const auto &e : g.matching(label))
      if (e.touches(b) && in[e.u == b ? e.v : e.u])
        ++c;
  }
  return c;
}

} // namespace

TEST_CASE("small closure example") {
  Matchings m(5);
  m[3] = {Edge(1, 2)};
  m[4] = {Edge(2, 3)};
  LabeledMatchingGraph g(5, 0.2, m);
  const std::vector<Vertex> s{1, 2};
  CHECK(closure(g, s) == std::vector<Vertex>{1, 2, 3, 4});
  const auto trace = closure_with_provenance(g, s);
  REQUIRE(trace.order.size() == 2);
  CHECK(trace.order[0].label == 3);
  CHECK(trace.order[0].via == Edge(1, 2));
  CHECK(trace.order[1].label == 4);
  CHECK(trace.order[1].via == Edge(2, 3));
}

TEST_CASE("graph validation") {
  CHECK_THROWS_AS(LabeledMatchingGraph(4, 0.25, Matchings{{Edge(0, 1)}, {}, {}, {}}), PreconditionError);
  CHECK_THROWS_AS(LabeledMatchingGraph(4, 0.25, Matchings{{}, {Edge(0, 2), Edge(2, 3)}, {}, {}}),
                  PreconditionError);
  CHECK_THROWS_AS(LabeledMatchingGraph(4, 0.25, Matchings{{}, {Edge(0, 4)}, {}, {}}), PreconditionError);
  CHECK_THROWS_AS(LabeledMatchingGraph(4, 0.25, Matchings{{}, {Edge(2, 2)}, {}, {}}), PreconditionError);
  CHECK_THROWS_AS(LabeledMatchingGraph(4, 0.25, Matchings(3)), PreconditionError);
}

TEST_CASE("worklist closure equals the rescan fixpoint") {
  Rng rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng() % 11;
    const auto g = random_graph(n, rng, (n - 1) / 2);
    const auto s = random_subset(n, rng() % (n + 1), rng);
    REQUIRE(closure(g, s) == scan_closure(n, g.matchings(), s));
  }
}

TEST_CASE("closure is extensive, monotone and idempotent") {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 4 + rng() % 40;
    const auto g = random_graph(n, rng, (n - 1) / 2);
    auto s = random_subset(n, rng() % (n / 2 + 1), rng);
    auto t = s;
    for (Vertex v : random_subset(n, rng() % 3, rng))
      t.push_back(v);
    const auto rs = closure(g, s), rt = closure(g, t);
    for (Vertex v : s)
      REQUIRE(std::binary_search(rs.begin(), rs.end(), v));
    REQUIRE(std::includes(rt.begin(), rt.end(), rs.begin(), rs.end()));
    REQUIRE(closure(g, rs) == rs);
  }
}

TEST_CASE("incremental state agrees with fresh closures") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 10 + rng() % 60;
    const auto g = random_graph(n, rng, (n - 1) / 2);
    ClosureState<LabeledMatchingGraph> st(g);
    std::vector<Vertex> s;
    for (int step = 0; step < 6; ++step) {
      const Vertex v = static_cast<Vertex>(rng() % n);
      auto with = s;
      with.push_back(v);
      const std::size_t expected = closure(g, with).size() - closure(g, s).size();
      CHECK(st.trial_gain(v) == expected);
      const std::size_t capped = st.trial_gain(v, 2);
      CHECK(capped == std::min<std::size_t>(expected, capped));
      CHECK((capped >= 2 || capped == expected));
      CHECK(st.add(v) == expected);
      s.push_back(v);
      auto members = st.members();
      std::sort(members.begin(), members.end());
      REQUIRE(members == closure(g, s));
    }
  }
}

TEST_CASE("one-round gains match their definition") {
  Rng rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 4 + rng() % 40;
    const auto g = random_graph(n, rng, (n - 1) / 2);
    ClosureState<LabeledMatchingGraph> st(g);
    st.add_all(random_subset(n, rng() % n, rng));
    const auto gain = one_round_gains(st);
    for (Vertex b = 0; b < n; ++b)
      REQUIRE(gain[b] == (st.reached(b) ? 0 : ref_gain(g, st.mask(), b)));
  }
}

TEST_CASE("derivations use edges of their own label") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 6 + rng() % 30;
    const auto g = random_graph(n, rng, (n - 1) / 2);
    const auto s = random_subset(n, 1 + rng() % 4, rng);
    const auto trace = closure_with_provenance(g, s);
    std::vector<std::uint8_t> known(n, 0);
    for (Vertex v : s)
      known[v] = 1;
    for (const auto &d : trace.order) {
      const auto &m = g.matching(d.label);
      REQUIRE(std::find(m.begin(), m.end(), d.via) != m.end());
      REQUIRE(known[d.via.u]);
      REQUIRE(known[d.via.v]);
      REQUIRE(!known[d.label]);
      known[d.label] = 1;
    }
    CHECK(trace.reached == closure(g, s));
  }
}

TEST_CASE("generators") {
  const auto h = gen_instance(InstanceKind::hadamard, {8}, 1);
  CHECK(h == materialize(HadamardGraph(8)));
  for (Vertex label = 0; label < 8; ++label)
    CHECK(h.matching(label).size() == 3);
  for (Vertex label = 1; label < 8; ++label)
    for (const auto &e : h.matching(label))
      CHECK((e.u ^ e.v) == label);

  const std::size_t n = 10;
  PerfectGraph p(n);
  std::set<Edge> seen;
  for (Vertex round = 0; round + 1 < n; ++round)
    for (Vertex u = 0; u < n; ++u) {
      const Vertex w = p.partner(u, round);
      REQUIRE(w != u);
      REQUIRE(p.partner(w, round) == u);
      seen.insert(Edge(u, w));
    }
  CHECK(seen.size() == n * (n - 1) / 2);
  const auto pg = materialize(p);
  for (Vertex label = 0; label < n; ++label)
    CHECK(pg.matching(label).size() == n / 2 - 1);

  InstanceParams rp{100, 0.25};
  const auto r1 = gen_instance(InstanceKind::random, rp, 5);
  CHECK(r1 == gen_instance(InstanceKind::random, rp, 5));
  CHECK(!(r1 == gen_instance(InstanceKind::random, rp, 6)));
  for (Vertex label = 0; label < 100; ++label)
    CHECK(r1.matching(label).size() == 25);

  const auto c = gen_instance(InstanceKind::concat, rp, 5);
  for (Vertex label = 0; label < 100; ++label)
    for (const auto &e : c.matching(label))
      CHECK((e.u < 50) == (e.v < 50));

  CHECK_THROWS_AS(HadamardGraph(12), PreconditionError);
  CHECK_THROWS_AS(PerfectGraph(7), PreconditionError);
  CHECK_THROWS_AS(parse_instance_kind("grid"), PreconditionError);
}

TEST_CASE("implicit graphs agree with their materializations") {
  for (std::size_t n : {8u, 16u, 32u}) {
    HadamardGraph h(n);
    const auto hm = materialize(h);
    PerfectGraph p(n);
    const auto pm = materialize(p);
    Rng rng(n);
    for (int t = 0; t < 20; ++t) {
      const auto s = random_subset(n, 1 + rng() % 4, rng);
      CHECK(closure(h, s) == closure(hm, s));
      CHECK(closure(p, s) == closure(pm, s));
    }
    for (Vertex u = 0; u < n; ++u) {
      CHECK(degree(h, u) == hm.degree(u));
      CHECK(degree(p, u) == pm.degree(u));
    }
  }
}

TEST_CASE("cleanup matches a full-rescan reference") {
  Rng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 60 + rng() % 60;
    const double delta = 0.2 + 0.1 * static_cast<double>(rng() % 3);
    // planted low-degree vertices: no matching touches them
    const std::size_t planted = rng() % 6;
    const auto size = static_cast<std::size_t>(std::ceil(delta * static_cast<double>(n)));
    Matchings m(n);
    for (Vertex label = 0; label < n; ++label) {
      std::vector<Vertex> pool;
      for (Vertex v = static_cast<Vertex>(planted); v < n; ++v)
        if (v != label)
          pool.push_back(v);
      std::shuffle(pool.begin(), pool.end(), rng);
      for (std::size_t e = 0; e < size; ++e)
        m[label].emplace_back(pool[2 * e], pool[2 * e + 1]);
    }
    LabeledMatchingGraph g(n, delta, m);
    const auto res = cleanup(g, delta);
    const auto ref = rescan_cleanup(g, delta);
    REQUIRE(res.removed == ref.removed);
    REQUIRE(res.kept == ref.kept);
    CHECK(res.min_degree == ref.min_degree);
    CHECK(res.removed.size() >= planted);
    CHECK(static_cast<double>(res.min_degree) >= res.threshold - 1e-9);
    CHECK(static_cast<double>(res.kept.size()) >= delta * static_cast<double>(n));
  }
}

TEST_CASE("cleanup keeps all of a perfect-matchings graph") {
  PerfectGraph p(16);
  const auto res = cleanup(p, 7.0 / 16);
  CHECK(res.removed.empty());
  CHECK(res.kept.size() == 16);
  CHECK(res.min_degree > 0);
}

TEST_CASE("cleanup precondition") {
  Matchings m(20);
  LabeledMatchingGraph empty(20, 0.3, m);
  CHECK_THROWS_AS(cleanup(empty, 0.3), PreconditionError);
  CHECK_THROWS_AS(cleanup(empty, 0.0), PreconditionError);
}

TEST_CASE("near-cover: a closure above (1 - delta) n is everything") {
  Rng rng(59);
  std::size_t above = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 20 + 2 * (rng() % 40);
    const double delta = 0.1 + 0.05 * static_cast<double>(rng() % 5);
    const auto kind = trial % 3 ? InstanceKind::random : InstanceKind::concat;
    const auto g = gen_instance(kind, {n, delta}, rng());
    const auto s = random_subset(n, 1 + rng() % 6, rng);
    const auto r = check_near_cover(g, s);
    REQUIRE(r.holds());
    above += r.above_threshold;
  }
  CHECK(above > 0);
}

TEST_CASE("grow_seed picks a best one-round vertex at every step") {
  HadamardGraph h(64);
  std::vector<std::uint8_t> active(64, 1);
  active[0] = 0;
  SubgraphView<HadamardGraph> g(h, active);
  const auto gm = materialize(g);
  const std::size_t d = 32;
  const auto res = grow_seed(g, d);
  CHECK(2 * res.reached >= d);
  CHECK(res.seed.size() <= 8);
  CHECK(res.seed.front() == 1);

  std::vector<std::uint8_t> in(64, 0);
  std::vector<Vertex> prefix;
  for (Vertex v : res.seed) {
    if (!prefix.empty()) {
      std::size_t best = 0;
      for (Vertex b = 1; b < 64; ++b)
        if (!in[b])
          best = std::max(best, ref_gain(gm, in, b));
      CHECK(ref_gain(gm, in, v) == best);
    }
    prefix.push_back(v);
    std::fill(in.begin(), in.end(), 0);
    for (Vertex u : closure(gm, prefix))
      in[u] = 1;
  }
  CHECK(closure(gm, res.seed).size() == res.reached);
}

TEST_CASE("grow_seed rejects low-degree vertices") {
  Matchings m(6);
  m[0] = {Edge(1, 2)};
  LabeledMatchingGraph g(6, 0.2, m);
  CHECK_THROWS_AS(grow_seed(g, 1), PreconditionError);
}

TEST_CASE("perfect matchings need at most 2 log2 n seeds") {
  for (std::size_t n : {16u, 64u, 256u, 1024u}) {
    PerfectGraph p(n);
    const auto tr = find_seed(p, std::span<const Vertex>{});
    CHECK(tr.covers);
    CHECK(tr.reached.size() == n);
    CHECK(static_cast<double>(tr.seed.size()) <= 2 * std::log2(static_cast<double>(n)));
    CHECK(closure(p, tr.seed).size() == n);
  }
}

TEST_CASE("find_seed covers random and two-part instances") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 100 + 2 * (rng() % 100);
    const auto kind = trial % 2 ? InstanceKind::random : InstanceKind::concat;
    const auto g = gen_instance(kind, {n, 0.2}, rng());
    const auto tr = find_seed(g, std::span<const Vertex>{});
    REQUIRE(tr.covers);
    CHECK(closure(g, tr.seed).size() == n);
    CHECK(tr.phases() <= tr.phase_limit);
    CHECK(tr.steps.front().kind == SeedStepKind::init);
    std::vector<Vertex> replay;
    for (std::size_t k = 1; k < tr.steps.size(); ++k)
      for (Vertex v : tr.steps[k].added)
        replay.push_back(v);
    CHECK(replay == tr.seed);
  }
}

TEST_CASE("hadamard seeds are bases of the position space") {
  for (std::size_t n : {16u, 256u, 1024u}) {
    HadamardGraph h(n);
    const auto tr = find_seed(h, std::span<const Vertex>{});
    CHECK(tr.covers);
    const auto r = static_cast<std::size_t>(std::log2(static_cast<double>(n)));
    // reaching all of [n] from S needs S to span {0,1}^r
    CHECK(tr.seed.size() >= r);
    CHECK(tr.seed.size() <= 2 * r);
  }
}

TEST_CASE("seed plus T1 determines every codeword of a small code") {
  StackedHadamardCode code(CodeParams::make(12, 3));
  const auto nf = extract_normal_form(hadamard_query_spec(code), code, 1.0 / 6);
  const auto g = graph_from_normal_form(nf);
  const auto t1 = nf.t1_positions();
  const auto tr = find_seed(g, t1);
  REQUIRE(tr.covers);
  auto base = tr.seed;
  base.insert(base.end(), t1.begin(), t1.end());
  const auto trace = closure_with_provenance(g, base);
  REQUIRE(trace.reached.size() == 16);
  for (const auto &c : code.enumerate()) {
    std::vector<std::int64_t> value(16, -1);
    for (Vertex v : base)
      value[v] = c[v];
    for (const auto &d : trace.order) {
      const auto *e = nf.t2_entry(d.label);
      REQUIRE(e);
      const auto idx = e->edge_index(d.via);
      REQUIRE(idx);
      value[d.label] = e->recover(*idx, static_cast<Symbol>(value[d.via.u]), static_cast<Symbol>(value[d.via.v]));
    }
    for (Vertex v = 0; v < 16; ++v)
      REQUIRE(value[v] == c[v]);
  }
}
