#pragma once

#include "lcc/code_core.hpp"
#include "lcc/normal_form.hpp"
#include "lcc/propagation.hpp"
#include "lcc/types.hpp"

#include <optional>
#include <unordered_set>
#include <vector>

namespace lcc {

struct EstimatorConfig {
  std::size_t r = 0;       // sample count; 0 derives it from c_factor
  double c_factor = 64;    // r = ceil(c_factor * tau^-2 * ln n)
  double weight_slack = 1.0 / 20;
  std::uint64_t seed = 1;

  std::size_t resolve_r(double tau, std::size_t n) const;
};

/// Answers queries from a fixed word and keeps count. calls() counts every
/// query; positions() lists each queried position once, in first-query order.
class CountingOracle {
public:
  explicit CountingOracle(const Word &w) : word_(&w), seen_(w.size(), 0) {}

  Symbol query(Position p);
  std::size_t calls() const { return calls_; }
  std::size_t distinct() const { return positions_.size(); }
  const std::vector<Position> &positions() const { return positions_; }

private:
  const Word *word_;
  std::vector<std::uint8_t> seen_;
  std::vector<Position> positions_;
  std::size_t calls_ = 0;
};

/// Weights W_sigma for one T1 coordinate, sorted by symbol; symbols with zero
/// weight are omitted.
struct WeightTable {
  Position u = 0;
  std::vector<std::pair<Symbol, double>> weights;

  double total() const;
  /// Heaviest symbol, smallest on ties; 0 for an empty table.
  Symbol argmax() const;
};

struct T1Recovery {
  std::vector<Position> samples; // Z_1..Z_r, with repetition
  std::vector<WeightTable> tables;
  std::vector<std::pair<Position, Symbol>> symbols; // sorted by position
  double max_summand = 0; // largest n p_Z f seen
};

/// Weighted-plurality recovery of c restricted to T1 from r uniform samples.
/// Every sampled position is queried exactly once through the oracle.
T1Recovery recover_t1(const NormalForm &nf, CountingOracle &oracle, const EstimatorConfig &cfg, Rng &rng);

/// Seed and propagation order for one normal form. Independent of the
/// codeword, so it is computed once and replayed for every decode.
struct DecodePlan {
  std::size_t n = 0;
  SeedTrace trace;
  std::vector<Position> seed;       // S, queried directly
  std::vector<Derivation> order;    // derivations of the rest, in order
  std::vector<std::uint8_t> covered; // closure of S + T1
};

DecodePlan make_decode_plan(const NormalForm &nf, const FindSeedOptions &opts = {});

enum class Provenance : std::uint8_t { unknown, sampled_t1, propagated, seed };

std::string to_string(Provenance p);

struct DecodeReport {
  Word recovered;
  bool complete = false; // every coordinate determined
  bool success = false;  // recovered equals the reference word, when one is given
  std::size_t sample_count = 0;
  std::size_t seed_queries = 0;
  std::size_t queries_total = 0; // sample_count + seed_queries
  std::vector<Position> query_positions; // distinct, first-query order
  std::vector<Provenance> provenance;
};

/// T1 by sampling, S by direct queries, everything else by replaying the
/// plan's derivations through the recovery tables.
DecodeReport decode_full(const NormalForm &nf, const DecodePlan &plan, CountingOracle &oracle,
                         const EstimatorConfig &cfg, Rng &rng, const Word *reference = nullptr);

/// Propagation only, from known symbols on S + T1.
Word propagate_from(const NormalForm &nf, const DecodePlan &plan, const Word &known);

struct TrialSummary {
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t sample_count = 0;
  std::size_t seed_size = 0;
  std::size_t max_queries_total = 0;
  double mean_queries_total = 0;
  double success_rate() const { return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0; }
};

/// Decodes `trials` random codewords. Trial j draws its message and samples
/// from trial_rng(master_seed, j).
TrialSummary run_decode_trials(const StackedHadamardCode &code, const NormalForm &nf, const DecodePlan &plan,
                               const EstimatorConfig &cfg, std::size_t trials, std::uint64_t master_seed,
                               std::size_t workers = 0);

/// 2 (t sigma_bits + 1).
double fano_bound(double t, double sigma_bits);

struct BoundReport {
  std::size_t n = 0;
  unsigned k = 0;
  double tau = 0;
  double delta = 0;
  unsigned sigma_bits = 0;
  std::size_t t = 0;
  double fano_log2_C_max = 0;
  double measured_constant = 0; // t / (tau^-4 log2 n)
  double theorem_log2_C_max = 0; // measured_constant * tau^-4 * log2 n * sigma_bits
  double kt_lower_n = 0;         // delta (k / sigma_bits)^2
  double construction_log2_C = 0;
};

/// delta defaults to tau.
BoundReport bound_report(std::size_t n, unsigned k, double tau, unsigned sigma_bits, std::size_t t,
                         std::optional<double> delta = std::nullopt);

} // namespace lcc
