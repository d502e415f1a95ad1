#include "lcc/io.hpp"

#include <fstream>
#include <sstream>

namespace lcc {

namespace {

Json edge_json(const Edge &e) { return Json::array({e.u, e.v}); }

template <class T> Json list(const std::vector<T> &v) {
  Json a = Json::array();
  for (const auto &x : v)
    a.push_back(x);
  return a;
}

const Json &field(const Json &j, const char *key) {
  if (!j.is_object() || !j.contains(key))
    throw FormatError(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T> T get(const Json &j, const char *key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("bad field '") + key + "': " + e.what());
  }
}

} // namespace

Json to_json(const Word &w) { return Json{{"bits", w.bits}, {"symbols", list(w.symbols)}}; }

Word word_from_json(const Json &j) {
  Word w;
  w.bits = get<unsigned>(j, "bits");
  w.symbols = get<std::vector<Symbol>>(j, "symbols");
  if (w.bits == 0 || w.bits > 32)
    throw FormatError("word: bits must be in [1, 32]");
  for (Symbol s : w.symbols)
    if (w.bits < 32 && s >> w.bits)
      throw FormatError("word: symbol exceeds alphabet");
  return w;
}

Json to_json(const CorruptionPattern &p) {
  return Json{{"positions", list(p.positions)}, {"replacements", list(p.replacements)}};
}

CorruptionPattern pattern_from_json(const Json &j) {
  CorruptionPattern p;
  p.positions = get<std::vector<Position>>(j, "positions");
  p.replacements = get<std::vector<Symbol>>(j, "replacements");
  if (p.positions.size() != p.replacements.size())
    throw FormatError("pattern: positions and replacements differ in length");
  return p;
}

Json instance_to_json(const LabeledMatchingGraph &g, const std::vector<Vertex> &t1) {
  Json m = Json::array();
  for (const auto &matching : g.matchings()) {
    Json edges = Json::array();
    for (const auto &e : matching)
      edges.push_back(edge_json(e));
    m.push_back(std::move(edges));
  }
  Json j{{"schema", kSchema}, {"n", g.vertex_count()}, {"delta", g.delta()}, {"matchings", std::move(m)}};
  if (!t1.empty())
    j["t1"] = list(t1);
  return j;
}

Instance instance_from_json(const Json &j) {
  if (!j.is_object())
    throw FormatError("instance: expected a JSON object");
  const auto n = get<std::size_t>(j, "n");
  const auto delta = get<double>(j, "delta");
  const Json &m = field(j, "matchings");
  if (!m.is_array() || m.size() != n)
    throw FormatError("instance: 'matchings' must hold one list per label");
  std::vector<std::vector<Edge>> matchings(n);
  for (std::size_t label = 0; label < n; ++label) {
    if (!m[label].is_array())
      throw FormatError("instance: matching " + std::to_string(label) + " is not a list");
    for (const auto &e : m[label]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
        throw FormatError("instance: edges must be pairs of non-negative integers");
      const auto u = e[0].get<std::uint64_t>(), v = e[1].get<std::uint64_t>();
      if (u >= n || v >= n)
        throw FormatError("instance: edge endpoint out of range in matching " + std::to_string(label));
      matchings[label].emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
  }
  Instance inst{LabeledMatchingGraph(n, delta, std::move(matchings)), {}};
  if (j.contains("t1")) {
    inst.t1 = get<std::vector<Vertex>>(j, "t1");
    for (Vertex v : inst.t1)
      if (v >= n)
        throw FormatError("instance: t1 vertex out of range");
  }
  return inst;
}

Json to_json(const NormalForm &nf, bool include_tables) {
  Json t1 = Json::array();
  for (const auto &c : nf.t1) {
    Json e{{"i", c.i}, {"p_phi", c.p_phi.str()}, {"vertex_cover", list(c.vertex_cover)}, {"heavy", list(c.heavy)}};
    if (include_tables) {
      Json dist = Json::array();
      for (const auto &d : c.dist)
        dist.push_back(Json::array({d.v, d.p.str()}));
      e["distribution"] = std::move(dist);
    }
    t1.push_back(std::move(e));
  }
  Json t2 = Json::array();
  for (const auto &m : nf.t2) {
    Json e{{"i", m.i},
           {"matching_size", m.edges.size()},
           {"untrimmed_size", m.untrimmed.size()},
           {"rule", m.rule == RecoveryRule::xor_symbols ? "xor" : "table"}};
    if (include_tables) {
      Json edges = Json::array();
      for (const auto &ed : m.edges)
        edges.push_back(edge_json(ed));
      e["edges"] = std::move(edges);
      if (m.rule == RecoveryRule::table) {
        Json tables = Json::array();
        for (const auto &t : m.tables)
          tables.push_back(Json{{"cells", list(t.cells)}, {"constrained", list(t.constrained)}});
        e["tables"] = std::move(tables);
      }
    }
    t2.push_back(std::move(e));
  }
  return Json{{"n", nf.n},
              {"bits", nf.bits},
              {"tau", nf.tau},
              {"epsilon", nf.epsilon},
              {"smoothness_vacuous", nf.smoothness_vacuous},
              {"t1_positions", list(nf.t1_positions())},
              {"t2_count", nf.t2.size()},
              {"t1", std::move(t1)},
              {"t2", std::move(t2)}};
}

Json to_json(const ValidationReport &r) {
  Json t2 = Json::array();
  for (const auto &f : r.t2_failures)
    t2.push_back(Json{{"i", f.i}, {"edge", edge_json(f.edge)}, {"codeword", f.codeword}, {"expected", f.expected},
                      {"got", f.got}});
  Json t1 = Json::array();
  for (const auto &f : r.t1_failures)
    t1.push_back(Json{{"i", f.i}, {"codeword", f.codeword}, {"success", f.success.str()}});
  return Json{{"passed", r.passed},
              {"sampled", r.sampled},
              {"codewords_checked", r.codewords_checked},
              {"min_t1_success", r.min_t1_success.str()},
              {"t2_failures", std::move(t2)},
              {"t1_failures", std::move(t1)}};
}

Json to_json(const SeedTrace &t) {
  Json steps = Json::array();
  for (const auto &s : t.steps) {
    Json e{{"kind", to_string(s.kind)}, {"added", list(s.added)}, {"reached_after", s.reached_after}};
    if (s.kind == SeedStepKind::cleanup_grow) {
      e["subgraph_size"] = s.subgraph_size;
      e["cleanup_removed"] = s.cleanup_removed;
      e["min_degree"] = s.min_degree;
      e["grow_constant"] = s.grow_constant;
    }
    steps.push_back(std::move(e));
  }
  return Json{{"n", t.n},
              {"delta", t.delta},
              {"t1", list(t.t1)},
              {"seed", list(t.seed)},
              {"seed_size", t.seed.size()},
              {"reached_size", t.reached.size()},
              {"covers", t.covers},
              {"phases_case1", t.case1},
              {"phases_case2", t.case2},
              {"phase_limit", t.phase_limit},
              {"phase_constant", t.phase_constant()},
              {"steps", std::move(steps)}};
}

Json to_json(const CleanupResult &r) {
  return Json{{"initial_size", r.initial_size}, {"delta", r.delta},         {"threshold", r.threshold},
              {"min_degree", r.min_degree},     {"kept", r.kept.size()},    {"removed", list(r.removed)},
              {"short_matchings", r.short_matchings}};
}

Json to_json(const DecodeReport &r) {
  std::size_t counts[4] = {0, 0, 0, 0};
  Json prov = Json::array();
  for (auto p : r.provenance) {
    ++counts[static_cast<int>(p)];
    prov.push_back(to_string(p));
  }
  return Json{{"complete", r.complete},
              {"success", r.success},
              {"sample_count", r.sample_count},
              {"seed_queries", r.seed_queries},
              {"queries_total", r.queries_total},
              {"distinct_positions", r.query_positions.size()},
              {"provenance_counts",
               Json{{"sampled-T1", counts[1]}, {"propagated", counts[2]}, {"seed", counts[3]}, {"unknown", counts[0]}}},
              {"provenance", std::move(prov)},
              {"recovered", to_json(r.recovered)}};
}

Json to_json(const TrialSummary &s) {
  return Json{{"trials", s.trials},
              {"successes", s.successes},
              {"success_rate", s.success_rate()},
              {"sample_count", s.sample_count},
              {"seed_size", s.seed_size},
              {"max_queries_total", s.max_queries_total},
              {"mean_queries_total", s.mean_queries_total}};
}

Json to_json(const BoundReport &b) {
  return Json{{"n", b.n},
              {"k", b.k},
              {"tau", b.tau},
              {"delta", b.delta},
              {"sigma_bits", b.sigma_bits},
              {"t", b.t},
              {"fano_log2_C_max", b.fano_log2_C_max},
              {"measured_constant", b.measured_constant},
              {"theorem_log2_C_max", b.theorem_log2_C_max},
              {"kt_lower_n", b.kt_lower_n},
              {"construction_log2_C", b.construction_log2_C}};
}

Json to_json(const InnerCode &c) {
  Json table = Json::array();
  for (const auto &row : c.table)
    table.push_back(list(row));
  return Json{{"name", c.name}, {"s", c.s}, {"t", c.t}, {"delta0", c.delta0}, {"table", std::move(table)}};
}

Json to_json(const DistanceReport &d) {
  return Json{{"fraction", d.fraction}, {"distance", d.distance},   {"length", d.length},
              {"single_codeword", d.single_codeword}, {"duplicate", d.duplicate}};
}

Json to_json(const ShatterResult &s) {
  Json cert = Json::object();
  for (std::size_t p = 0; p < s.certificate.size(); ++p) {
    std::string key;
    for (std::size_t j = 0; j < s.I.size(); ++j)
      key += ((p >> j) & 1u) ? '1' : '0';
    cert[key] = s.certificate[p];
  }
  return Json{{"I", list(s.I)},           {"vc", s.I.size()},
              {"max_dim", s.max_dim},     {"upper_bound", s.upper_bound},
              {"capped", s.capped},       {"examined", s.examined},
              {"dudley_floor", s.dudley_floor}, {"meets_floor", s.meets_floor},
              {"certificate", std::move(cert)}};
}

Json to_json(const LdcConstruction &l) {
  Json reps = Json::array();
  for (std::size_t x = 0; x < l.representatives.size(); ++x)
    reps.push_back(Json{{"x", x}, {"outer_index", l.representative_of[x]}, {"symbols", list(l.representatives[x].symbols)}});
  return Json{{"I", list(l.I)},
              {"block_of", list(l.block_of)},
              {"offset", list(l.offset)},
              {"inner", to_json(l.inner)},
              {"outer", Json{{"k", l.outer.k}, {"b", l.outer.b}, {"n", l.outer.n}, {"blocks", l.outer.blocks}}},
              {"representatives", std::move(reps)}};
}

Json to_json(const LdcTrialSummary &s) {
  return Json{{"trials", s.trials},
              {"successes", s.successes},
              {"success_rate", s.success_rate()},
              {"corruptions", s.corruptions},
              {"always_two_queries", s.always_two_queries}};
}

Json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw FormatError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

void write_json_file(const std::string &path, const Json &j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw PreconditionError("cannot write '" + path + "'");
  out << dump(j);
  if (!out)
    throw PreconditionError("failed writing '" + path + "'");
}

} // namespace lcc
