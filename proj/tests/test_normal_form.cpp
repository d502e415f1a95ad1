#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lcc/normal_form.hpp"

#include <algorithm>
#include <numeric>

using namespace lcc;

namespace {

TableCode repetition(std::size_t n) {
  TableCode c;
  c.n = n;
  c.bits = 1;
  c.codewords = {Word{1, std::vector<Symbol>(n, 0)}, Word{1, std::vector<Symbol>(n, 1)}};
  return c;
}

// coordinate i queries a uniform pair from a perfect matching of [n]
std::vector<std::vector<WeightedPair>> perfect_lists(std::size_t n) {
  std::vector<std::vector<WeightedPair>> lists(n);
  for (Position i = 0; i < n; ++i)
    for (Vertex u = 0; u < n; u += 2)
      lists[i].push_back({Edge(u, u + 1), Rational(2, static_cast<std::int64_t>(n))});
  return lists;
}

Vertex star_center(Position i) { return i == 0 ? 1 : 0; }

// coordinate i queries {center, leaf} for a uniform leaf
std::vector<std::vector<WeightedPair>> star_lists(std::size_t n) {
  std::vector<std::vector<WeightedPair>> lists(n);
  for (Position i = 0; i < n; ++i) {
    const Vertex c = star_center(i);
    for (Vertex j = 0; j < n; ++j)
      if (j != c && j != i)
        lists[i].push_back({Edge(c, j), Rational(1, static_cast<std::int64_t>(n - 2))});
  }
  return lists;
}

Symbol leaf_symbol(Position i, Edge e, Symbol at_u, Symbol at_v) {
  return e.u == star_center(i) ? at_v : at_u;
}

bool is_matching(const std::vector<Edge> &m) {
  std::vector<Vertex> ends;
  for (const auto &e : m) {
    if (e.u == e.v)
      return false;
    ends.push_back(e.u);
    ends.push_back(e.v);
  }
  std::sort(ends.begin(), ends.end());
  return std::adjacent_find(ends.begin(), ends.end()) == ends.end();
}

} // namespace

TEST_CASE("greedy matching is maximal and its endpoints cover every edge") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Vertex n = 4 + rng() % 30;
    std::vector<Edge> edges;
    const std::size_t count = rng() % (3 * n);
    for (std::size_t t = 0; t < count; ++t)
      edges.emplace_back(static_cast<Vertex>(rng() % n), static_cast<Vertex>(rng() % n));
    const Vertex avoid = static_cast<Vertex>(rng() % n);
    const auto m = greedy_maximal_matching(edges, avoid);
    REQUIRE(is_matching(m));
    std::vector<std::uint8_t> covered(n, 0);
    for (const auto &e : m) {
      REQUIRE(!e.touches(avoid));
      covered[e.u] = covered[e.v] = 1;
    }
    CHECK(std::count(covered.begin(), covered.end(), 1) == static_cast<long>(2 * m.size()));
    for (const auto &e : edges)
      if (e.u != e.v && !e.touches(avoid))
        REQUIRE((covered[e.u] || covered[e.v]));
  }
}

TEST_CASE("greedy order is by (min, max) endpoint") {
  const auto m = greedy_maximal_matching({Edge(2, 3), Edge(1, 2), Edge(0, 3), Edge(0, 1)});
  CHECK(m == std::vector<Edge>{Edge(0, 1), Edge(2, 3)});
}

TEST_CASE("hadamard spec: only local position zero lands in T1") {
  StackedHadamardCode code(CodeParams::make(8, 2));
  const auto spec = hadamard_query_spec(code);
  const auto nf = extract_normal_form(spec, code, 1.0 / 6);
  CHECK(nf.t1_positions() == std::vector<Position>{0});
  REQUIRE(nf.t2.size() == 15);
  const auto target = static_cast<std::size_t>(std::ceil(16.0 / 24));
  for (const auto &e : nf.t2) {
    CHECK(e.untrimmed.size() == 7);
    CHECK(e.edges.size() == target);
    CHECK(is_matching(e.untrimmed));
    for (const auto &ed : e.untrimmed)
      CHECK(!ed.touches(e.i));
    // trimming keeps the lexicographically smallest edges
    auto sorted = e.untrimmed;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::equal(e.edges.begin(), e.edges.end(), sorted.begin()));
  }
  const auto report = validate_zero_error(nf, code);
  CHECK(report.passed);
  CHECK(!report.sampled);
  CHECK(report.codewords_checked == 256);
  CHECK(report.min_t1_success == Rational(1));

  // position 0 reads only the position itself, which is always 0
  const auto *t1 = nf.t1_entry(0);
  REQUIRE(t1);
  for (const auto &w : code.enumerate())
    CHECK(t1->success_probability(w) == Rational(1));
}

TEST_CASE("blocks variant puts every block start in T1") {
  StackedHadamardCode code(CodeParams::make(8, 2, 1.0 / 12, 2));
  const auto nf = extract_normal_form(hadamard_query_spec(code), code, 1.0 / 2);
  CHECK(nf.t1_positions() == std::vector<Position>{0, 4});
  CHECK(validate_zero_error(nf, code).passed);
}

TEST_CASE("table recovery agrees with xor recovery") {
  StackedHadamardCode code(CodeParams::make(8, 2));
  const auto spec = hadamard_query_spec(code);
  const auto xor_nf = extract_normal_form(spec, code, 1.0 / 2);
  const auto table_nf = extract_normal_form(spec, TableCode::from(code), 1.0 / 2);
  REQUIRE(xor_nf.t2_positions() == table_nf.t2_positions());
  for (std::size_t k = 0; k < xor_nf.t2.size(); ++k) {
    const auto &a = xor_nf.t2[k];
    const auto &b = table_nf.t2[k];
    REQUIRE(a.edges == b.edges);
    REQUIRE(b.rule == RecoveryRule::table);
    for (std::size_t e = 0; e < b.edges.size(); ++e)
      for (Symbol x = 0; x < 4; ++x)
        for (Symbol y = 0; y < 4; ++y) {
          const auto &t = b.tables[e];
          if (t.constrained[(x << 2) | y])
            CHECK(t.at(x, y) == (x ^ y));
          else
            CHECK(t.at(x, y) == 0);
        }
  }
  CHECK(validate_zero_error(table_nf, TableCode::from(code)).passed);
}

TEST_CASE("perfect-matching supports put every coordinate in T2") {
  const std::size_t n = 8;
  auto spec = QuerySpec::from_lists(n, 1, perfect_lists(n), [](Position, Edge, Symbol u, Symbol) { return u; });
  const auto nf = extract_normal_form(spec, repetition(n), 1.0);
  CHECK(nf.t1.empty());
  CHECK(nf.t2.size() == n);
  for (const auto &e : nf.t2)
    CHECK(e.untrimmed.size() == n / 2 - 1);
  CHECK(validate_zero_error(nf, repetition(n)).passed);
}

TEST_CASE("star support gives a one-query corrector covered by the center") {
  const std::size_t n = 40;
  const double tau = 0.5; // epsilon n = 5 > 1
  auto spec = QuerySpec::from_lists(n, 1, star_lists(n), leaf_symbol);
  const auto nf = extract_normal_form(spec, repetition(n), tau);
  REQUIRE(nf.t1.size() == n);
  CHECK(nf.t2.empty());
  CHECK(!nf.smoothness_vacuous);
  for (const auto &t : nf.t1) {
    const Vertex c = star_center(t.i);
    CHECK(t.vertex_cover == std::vector<Position>{c});
    CHECK(t.heavy == std::vector<Position>{c});
    CHECK(t.p_phi == Rational(0));
    CHECK(t.dist.size() == n - 2);
    for (const auto &e : t.dist) {
      CHECK(e.v != c);
      CHECK(e.v != t.i);
      CHECK(e.p == Rational(1, n - 2));
    }
    Rational sum = t.p_phi;
    for (const auto &e : t.dist)
      sum += e.p;
    CHECK(sum == Rational(1));
    CHECK(t.output_distribution(t.dist.front().v, 1) == SymbolDistribution{{1, Rational(1)}});
  }
  const auto report = validate_zero_error(nf, repetition(n));
  CHECK(report.passed);
  const auto margin = smoothness_margin(nf);
  CHECK(margin.margin == doctest::Approx((1.0 / 38) * tau * n / 4));
  CHECK(margin.margin <= 1.0);
}

TEST_CASE("a weak one-query corrector is reported") {
  const std::size_t n = 40;
  // half the leaves answer with the complement
  auto decide = [](Position i, Edge e, Symbol u, Symbol v) {
    const Vertex leaf = e.u == star_center(i) ? e.v : e.u;
    const Symbol s = leaf_symbol(i, e, u, v);
    return leaf % 2 ? s ^ 1u : s;
  };
  auto spec = QuerySpec::from_lists(n, 1, star_lists(n), decide);
  const auto nf = extract_normal_form(spec, repetition(n), 0.5);
  const auto report = validate_zero_error(nf, repetition(n));
  CHECK(!report.passed);
  REQUIRE(!report.t1_failures.empty());
  CHECK(report.min_t1_success < Rational(2, 3));
  CHECK(report.t2_failures.empty());
}

TEST_CASE("a flipped table cell is caught with its edge") {
  StackedHadamardCode code(CodeParams::make(8, 2));
  const auto table = TableCode::from(code);
  auto nf = extract_normal_form(hadamard_query_spec(code), table, 1.0 / 2);
  auto &entry = nf.t2[4];
  const Edge victim = entry.edges[1];
  auto &t = entry.tables[1];
  t.cells[(1u << 2) | 2u] ^= 1u;
  const auto report = validate_zero_error(nf, table);
  CHECK(!report.passed);
  REQUIRE(!report.t2_failures.empty());
  for (const auto &f : report.t2_failures) {
    CHECK(f.i == entry.i);
    CHECK(f.edge == victim);
    const Word &c = table.codewords[f.codeword];
    CHECK(c[f.edge.u] == 1);
    CHECK(c[f.edge.v] == 2);
    CHECK(f.got != f.expected);
  }
}

TEST_CASE("random permutation code: tables built by enumeration validate") {
  Rng rng(23);
  const std::size_t n = 12;
  TableCode code;
  code.n = n;
  code.bits = 3;
  code.codewords.assign(8, Word{3, std::vector<Symbol>(n, 0)});
  for (std::size_t pos = 0; pos < n; ++pos) {
    std::vector<Symbol> perm(8);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t c = 0; c < 8; ++c)
      code.codewords[c].symbols[pos] = perm[c];
  }
  // any single symbol identifies the codeword
  auto decide = [code](Position i, Edge e, Symbol at_u, Symbol) {
    for (const auto &w : code.codewords)
      if (w[e.u] == at_u)
        return w[i];
    return Symbol{0};
  };
  std::vector<std::vector<WeightedPair>> lists(n);
  for (Position i = 0; i < n; ++i)
    for (Vertex u = 0; u < n; u += 2)
      lists[i].push_back({Edge(u, u + 1), Rational(2, n)});
  const auto nf = extract_normal_form(QuerySpec::from_lists(n, 3, lists, decide), code, 1.0);
  CHECK(nf.t2.size() == n);
  for (const auto &e : nf.t2) {
    for (const auto &t : e.tables)
      CHECK(std::count(t.constrained.begin(), t.constrained.end(), 1) == 8);
  }
  CHECK(validate_zero_error(nf, code).passed);
}

TEST_CASE("non-functional edge raises a zero-error violation") {
  TableCode code;
  code.n = 4;
  code.bits = 1;
  code.codewords = {Word{1, {0, 0, 0, 0}}, Word{1, {1, 0, 0, 0}}};
  auto spec = QuerySpec::from_lists(4, 1, perfect_lists(4), [](Position, Edge, Symbol u, Symbol) { return u; });
  try {
    (void)extract_normal_form(spec, code, 1.0);
    FAIL("expected a violation");
  } catch (const ZeroErrorViolation &v) {
    CHECK(v.coordinate == 0);
    CHECK(v.edge == Edge(2, 3));
    CHECK(v.first_codeword == 0);
    CHECK(v.second_codeword == 1);
  }
}

TEST_CASE("smoothness margin of hand-built correctors") {
  NormalForm nf;
  nf.n = 100;
  nf.tau = 0.2;
  SmoothOneQueryCorrector uniform;
  uniform.i = 0;
  for (Position v = 0; v < 100; ++v)
    uniform.dist.push_back({v, Rational(1, 100), {}});
  nf.t1.push_back(uniform);
  CHECK(smoothness_margin(nf).margin == doctest::Approx(0.2 / 4));

  SmoothOneQueryCorrector point;
  point.i = 1;
  point.dist.push_back({7, Rational(1), {}});
  nf.t1.push_back(point);
  const auto m = smoothness_margin(nf);
  CHECK(m.margin == doctest::Approx(0.2 * 100 / 4));
  CHECK(m.margin > 1);
  CHECK(m.i == 1);
  CHECK(m.v == 7);
}

TEST_CASE("extraction on random specs is smooth, bounded and deterministic") {
  Rng rng(31);
  const std::size_t n = 32;
  StackedHadamardCode code(CodeParams::make(5, 1));
  for (int trial = 0; trial < 40; ++trial) {
    const double tau = 0.25 + 0.75 * static_cast<double>(rng() % 100) / 100;
    std::vector<std::vector<WeightedPair>> lists(n);
    for (Position i = 0; i < n; ++i) {
      // a few hubs plus sparse noise, with integer weights
      const std::size_t count = 1 + rng() % 12;
      std::vector<std::int64_t> w(count);
      std::int64_t total = 0;
      for (auto &x : w)
        total += (x = 1 + static_cast<std::int64_t>(rng() % 5));
      for (std::size_t t = 0; t < count; ++t) {
        const Vertex a = static_cast<Vertex>(rng() % 3), b = static_cast<Vertex>(rng() % n);
        lists[i].push_back({Edge(rng() % 2 ? a : b, b), Rational(w[t], total)});
      }
    }
    auto decide = [](Position, Edge, Symbol u, Symbol v) { return u ^ v; };
    const auto spec = QuerySpec::from_lists(n, 1, lists, decide);
    const auto nf = extract_normal_form(spec, code, tau);
    const double eps_n = tau / 4 * n;
    REQUIRE(nf.t1.size() + nf.t2.size() == n);
    for (const auto &t : nf.t1) {
      CHECK(static_cast<double>(t.heavy.size()) <= 2 * eps_n + 1e-9);
      for (const auto &wp : lists[t.i])
        if (wp.pair.u != wp.pair.v)
          CHECK((std::binary_search(t.vertex_cover.begin(), t.vertex_cover.end(), wp.pair.u) ||
                 std::binary_search(t.vertex_cover.begin(), t.vertex_cover.end(), wp.pair.v)));
      Rational sum = t.p_phi;
      for (const auto &e : t.dist)
        sum += e.p;
      CHECK(sum == Rational(1));
    }
    for (const auto &e : nf.t2)
      CHECK(static_cast<double>(e.edges.size()) >= eps_n - 1e-9);
    CHECK(smoothness_margin(nf).margin <= 1.0);

    const auto again = extract_normal_form(spec, code, tau);
    CHECK(again.t1_positions() == nf.t1_positions());
    for (std::size_t k = 0; k < nf.t2.size(); ++k)
      CHECK(again.t2[k].edges == nf.t2[k].edges);
  }
}

TEST_CASE("extraction preconditions") {
  StackedHadamardCode code(CodeParams::make(4, 2));
  const auto spec = hadamard_query_spec(code);
  CHECK_THROWS_AS(extract_normal_form(spec, code, 1.5), PreconditionError);
  CHECK_THROWS_AS(extract_normal_form(spec, code, 0.0), PreconditionError);
  // tau n < 4: the smoothness cap is above 1
  const auto nf = extract_normal_form(spec, code, 0.5);
  CHECK(nf.smoothness_vacuous);

  std::vector<std::vector<WeightedPair>> bad(4, {{Edge(0, 1), Rational(1, 2)}});
  auto decide = [](Position, Edge, Symbol u, Symbol) { return u; };
  CHECK_THROWS_AS(extract_normal_form(QuerySpec::from_lists(4, 2, bad, decide), code, 1.0), PreconditionError);
  std::vector<std::vector<WeightedPair>> out_of_range(4, {{Edge(0, 9), Rational(1)}});
  CHECK_THROWS_AS(extract_normal_form(QuerySpec::from_lists(4, 2, out_of_range, decide), code, 1.0),
                  PreconditionError);
}
