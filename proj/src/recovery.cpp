#include "lcc/recovery.hpp"

#include "lcc/parallel.hpp"

#include <cmath>
#include <map>

namespace lcc {

std::size_t EstimatorConfig::resolve_r(double tau, std::size_t n) const {
  if (r > 0)
    return r;
  if (!(tau > 0.0))
    throw PreconditionError("estimator: tau must be positive");
  if (!(c_factor > 0.0))
    throw PreconditionError("estimator: sample constant must be positive");
  const double v = std::ceil(c_factor / (tau * tau) * std::log(static_cast<double>(std::max<std::size_t>(n, 2))));
  return std::max<std::size_t>(1, static_cast<std::size_t>(v));
}

Symbol CountingOracle::query(Position p) {
  if (p >= word_->size())
    throw std::out_of_range("oracle query out of range");
  ++calls_;
  if (!seen_[p]) {
    seen_[p] = 1;
    positions_.push_back(p);
  }
  return (*word_)[p];
}

double WeightTable::total() const {
  double s = 0;
  for (const auto &[sym, w] : weights)
    s += w;
  return s;
}

Symbol WeightTable::argmax() const {
  Symbol best = 0;
  double best_w = -1;
  for (const auto &[sym, w] : weights)
    if (w > best_w) {
      best = sym;
      best_w = w;
    }
  return best;
}

T1Recovery recover_t1(const NormalForm &nf, CountingOracle &oracle, const EstimatorConfig &cfg, Rng &rng) {
  T1Recovery out;
  if (nf.t1.empty())
    return out;
  if (nf.n == 0)
    throw PreconditionError("recover_t1: empty code");
  const std::size_t r = cfg.resolve_r(nf.tau, nf.n);
  std::uniform_int_distribution<Position> pick(0, static_cast<Position>(nf.n - 1));
  out.samples.resize(r);
  for (auto &z : out.samples)
    z = pick(rng);

  // multiplicities of the distinct sampled positions, in first-draw order
  std::vector<std::size_t> count(nf.n, 0);
  std::vector<Position> distinct;
  for (Position z : out.samples)
    if (count[z]++ == 0)
      distinct.push_back(z);
  std::vector<Symbol> value(nf.n, 0);
  for (Position z : distinct)
    value[z] = oracle.query(z);

  const double n = static_cast<double>(nf.n);
  const double cap = 4.0 / nf.tau;
  const double inv_r = 1.0 / static_cast<double>(r);
  for (const auto &corr : nf.t1) {
    std::map<Symbol, double> w;
    const double p_phi = corr.p_phi.to_double();
    if (p_phi > 0)
      for (const auto &[sym, pr] : corr.output_distribution(std::nullopt, 0))
        w[sym] += p_phi * pr.to_double();
    for (Position z : distinct) {
      const auto *e = corr.entry(z);
      if (!e)
        continue;
      const double np = n * e->p.to_double();
      for (const auto &[sym, pr] : corr.output_distribution(z, value[z])) {
        const double summand = np * pr.to_double();
        if (summand > cap * (1 + 1e-9))
          throw InvariantError("recover_t1: summand " + std::to_string(summand) + " exceeds 4/tau at coordinate " +
                               std::to_string(corr.i));
        out.max_summand = std::max(out.max_summand, summand);
        w[sym] += summand * static_cast<double>(count[z]) * inv_r;
      }
    }
    WeightTable t;
    t.u = corr.i;
    for (const auto &[sym, weight] : w)
      if (weight > 0)
        t.weights.emplace_back(sym, weight);
    out.symbols.emplace_back(corr.i, t.argmax());
    out.tables.push_back(std::move(t));
  }
  return out;
}

DecodePlan make_decode_plan(const NormalForm &nf, const FindSeedOptions &opts) {
  DecodePlan plan;
  plan.n = nf.n;
  const LabeledMatchingGraph g = graph_from_normal_form(nf);
  const std::vector<Position> t1 = nf.t1_positions();
  plan.trace = find_seed(g, t1, opts);
  plan.seed = plan.trace.seed;
  std::vector<Vertex> seeds = plan.seed;
  seeds.insert(seeds.end(), t1.begin(), t1.end());
  ClosureTrace ct = closure_with_provenance(g, seeds);
  plan.order = std::move(ct.order);
  plan.covered.assign(nf.n, 0);
  for (Vertex v : ct.reached)
    plan.covered[v] = 1;
  return plan;
}

std::string to_string(Provenance p) {
  switch (p) {
  case Provenance::unknown:
    return "unknown";
  case Provenance::sampled_t1:
    return "sampled-T1";
  case Provenance::propagated:
    return "propagated";
  case Provenance::seed:
    return "seed";
  }
  return "?";
}

namespace {

void replay(const NormalForm &nf, const DecodePlan &plan, std::vector<Symbol> &values, std::vector<Provenance> &prov) {
  for (const auto &d : plan.order) {
    const MatchingEntry *entry = nf.t2_entry(d.label);
    if (!entry)
      throw InvariantError("decode: derived vertex " + std::to_string(d.label) + " is not in T2");
    const auto idx = entry->edge_index(d.via);
    if (!idx)
      throw InvariantError("decode: derivation edge missing from matching " + std::to_string(d.label));
    values[d.label] = entry->recover(*idx, values[d.via.u], values[d.via.v]);
    prov[d.label] = Provenance::propagated;
  }
}

} // namespace

DecodeReport decode_full(const NormalForm &nf, const DecodePlan &plan, CountingOracle &oracle,
                         const EstimatorConfig &cfg, Rng &rng, const Word *reference) {
  if (plan.n != nf.n)
    throw PreconditionError("decode: plan does not belong to this normal form");
  DecodeReport rep;
  std::vector<Symbol> values(nf.n, 0);
  rep.provenance.assign(nf.n, Provenance::unknown);

  const T1Recovery t1 = recover_t1(nf, oracle, cfg, rng);
  for (const auto &[u, sym] : t1.symbols) {
    values[u] = sym;
    rep.provenance[u] = Provenance::sampled_t1;
  }
  for (Position s : plan.seed) {
    values[s] = oracle.query(s);
    rep.provenance[s] = Provenance::seed;
  }
  replay(nf, plan, values, rep.provenance);

  rep.recovered = Word{nf.bits, std::move(values)};
  rep.complete = std::none_of(rep.provenance.begin(), rep.provenance.end(),
                              [](Provenance p) { return p == Provenance::unknown; });
  rep.sample_count = t1.samples.size();
  rep.seed_queries = plan.seed.size();
  rep.queries_total = rep.sample_count + rep.seed_queries;
  rep.query_positions = oracle.positions();
  rep.success = reference && rep.complete && rep.recovered == *reference;
  return rep;
}

Word propagate_from(const NormalForm &nf, const DecodePlan &plan, const Word &known) {
  if (known.size() != nf.n)
    throw PreconditionError("propagate_from: word has wrong length");
  std::vector<Symbol> values(nf.n, 0);
  std::vector<Provenance> prov(nf.n, Provenance::unknown);
  for (Position u : nf.t1_positions())
    values[u] = known[u];
  for (Position s : plan.seed)
    values[s] = known[s];
  replay(nf, plan, values, prov);
  return Word{nf.bits, std::move(values)};
}

TrialSummary run_decode_trials(const StackedHadamardCode &code, const NormalForm &nf, const DecodePlan &plan,
                               const EstimatorConfig &cfg, std::size_t trials, std::uint64_t master_seed,
                               std::size_t workers) {
  std::vector<std::uint8_t> ok(trials, 0);
  std::vector<std::size_t> queries(trials, 0);
  std::vector<std::size_t> samples(trials, 0);
  parallel_for(
      trials,
      [&](std::size_t j) {
        Rng rng = trial_rng(master_seed, j);
        const Word c = code.encode(Message::random(code.params().k, rng));
        CountingOracle oracle(c);
        const DecodeReport rep = decode_full(nf, plan, oracle, cfg, rng, &c);
        ok[j] = rep.success;
        queries[j] = rep.queries_total;
        samples[j] = rep.sample_count;
      },
      workers);
  TrialSummary s;
  s.trials = trials;
  s.seed_size = plan.seed.size();
  double sum = 0;
  for (std::size_t j = 0; j < trials; ++j) {
    s.successes += ok[j];
    s.max_queries_total = std::max(s.max_queries_total, queries[j]);
    s.sample_count = std::max(s.sample_count, samples[j]);
    sum += static_cast<double>(queries[j]);
  }
  s.mean_queries_total = trials ? sum / static_cast<double>(trials) : 0;
  return s;
}

double fano_bound(double t, double sigma_bits) {
  if (t < 0 || sigma_bits < 0)
    throw PreconditionError("fano_bound: negative input");
  return 2 * (t * sigma_bits + 1);
}

BoundReport bound_report(std::size_t n, unsigned k, double tau, unsigned sigma_bits, std::size_t t,
                         std::optional<double> delta) {
  if (n < 2 || !(tau > 0.0) || tau > 1 || sigma_bits == 0)
    throw PreconditionError("bound_report: invalid parameters");
  BoundReport b;
  b.n = n;
  b.k = k;
  b.tau = tau;
  b.delta = delta.value_or(tau);
  b.sigma_bits = sigma_bits;
  b.t = t;
  b.fano_log2_C_max = fano_bound(static_cast<double>(t), sigma_bits);
  const double shape = std::pow(tau, -4) * std::log2(static_cast<double>(n));
  b.measured_constant = static_cast<double>(t) / shape;
  b.theorem_log2_C_max = b.measured_constant * shape * sigma_bits;
  const double ratio = static_cast<double>(k) / sigma_bits;
  b.kt_lower_n = b.delta * ratio * ratio;
  b.construction_log2_C = k;
  return b;
}

} // namespace lcc
