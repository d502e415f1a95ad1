#pragma once

#include "lcc/code_core.hpp"
#include "lcc/rational.hpp"
#include "lcc/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace lcc {

/// A code given by the explicit list of its codewords.
struct TableCode {
  std::size_t n = 0;
  unsigned bits = 1;
  std::vector<Word> codewords;

  static TableCode from(const StackedHadamardCode &code);
};

/// One pair in the support of a coordinate's query distribution. A pair with
/// u == v is a single-position query.
struct WeightedPair {
  Edge pair;
  Rational weight;
};

/// Output rule of a non-adaptive two-query corrector: given coordinate i, the
/// sampled pair, and the symbols read at pair.u and pair.v, return a symbol.
using Decision = std::function<Symbol(Position i, Edge pair, Symbol at_u, Symbol at_v)>;

/// Query distributions Q_i of a two-query corrector, one per coordinate,
/// together with its decision rule. Pairs are produced on demand so that
/// large structured correctors never need to be materialized at once.
class QuerySpec {
public:
  using PairSource = std::function<std::vector<WeightedPair>(Position)>;

  QuerySpec(std::size_t n, unsigned bits, PairSource pairs, Decision decide);
  static QuerySpec from_lists(std::size_t n, unsigned bits, std::vector<std::vector<WeightedPair>> lists,
                              Decision decide);

  std::size_t n() const { return n_; }
  unsigned bits() const { return bits_; }
  std::vector<WeightedPair> pairs(Position i) const { return pairs_(i); }
  const std::shared_ptr<const Decision> &decision() const { return decide_; }

private:
  std::size_t n_;
  unsigned bits_;
  PairSource pairs_;
  std::shared_ptr<const Decision> decide_;
};

/// The stacked-Hadamard corrector: for position a with local offset l, the
/// pair {xi, l ^ xi} for uniform xi, output the XOR of both reads. For l = 0
/// every pair degenerates to the single query {xi, xi}.
QuerySpec hadamard_query_spec(const StackedHadamardCode &code);

/// Pair sampled by the original corrector and its probability, as seen from
/// the one-query simulation that zeroes the excluded positions.
struct OneQueryBranch {
  Edge pair;
  Rational weight;
};

struct OneQueryEntry {
  Position v = 0;
  Rational p;
  std::vector<OneQueryBranch> branches;
};

using SymbolDistribution = std::vector<std::pair<Symbol, Rational>>;

/// Smooth one-query corrector for a T1 coordinate.
struct SmoothOneQueryCorrector {
  Position i = 0;
  Rational p_phi;
  std::vector<OneQueryBranch> phi_branches;
  std::vector<OneQueryEntry> dist;   // sorted by v, p > 0
  std::vector<Position> vertex_cover;
  std::vector<Position> heavy;       // B_i
  std::vector<Position> excluded;    // vertex_cover + heavy, sorted
  std::shared_ptr<const Decision> decide;

  Rational probability(Position v) const;
  const OneQueryEntry *entry(Position v) const;
  bool is_excluded(Position v) const;

  /// Distribution of R_v(z), or of R_phi when v is empty.
  SymbolDistribution output_distribution(std::optional<Position> v, Symbol z) const;

  /// Pr_{v ~ D}[R_v(c_v) = c_i].
  Rational success_probability(const Word &c) const;
};

/// |Sigma| x |Sigma| lookup table of a recovery map. Cells no codeword reaches
/// hold 0 and are marked unconstrained.
struct RecoveryTable {
  unsigned bits = 1;
  std::vector<Symbol> cells;
  std::vector<std::uint8_t> constrained;

  Symbol at(Symbol zu, Symbol zv) const { return cells[(static_cast<std::size_t>(zu) << bits) | zv]; }
};

enum class RecoveryRule { xor_symbols, table };

struct MatchingEntry {
  Position i = 0;
  std::vector<Edge> edges;       // trimmed, lexicographically smallest
  std::vector<Edge> untrimmed;   // the full greedy maximal matching
  RecoveryRule rule = RecoveryRule::xor_symbols;
  std::vector<RecoveryTable> tables; // aligned with edges when rule == table

  Symbol recover(std::size_t edge_index, Symbol at_u, Symbol at_v) const;
  std::optional<std::size_t> edge_index(Edge e) const;
};

struct NormalForm {
  std::size_t n = 0;
  unsigned bits = 1;
  double tau = 0;
  double epsilon = 0;
  /// tau * n < 4: the smoothness cap 4 / (tau n) exceeds 1 and constrains nothing.
  bool smoothness_vacuous = false;
  std::vector<std::uint8_t> in_t1;
  std::vector<SmoothOneQueryCorrector> t1; // sorted by i
  std::vector<MatchingEntry> t2;           // sorted by i

  std::vector<Position> t1_positions() const;
  std::vector<Position> t2_positions() const;
  const SmoothOneQueryCorrector *t1_entry(Position i) const;
  const MatchingEntry *t2_entry(Position i) const;
};

/// A codeword pair exposing that c_i is not a function of (c_j, c_k).
class ZeroErrorViolation : public std::runtime_error {
public:
  ZeroErrorViolation(Position i, Edge edge, std::size_t first, std::size_t second);
  Position coordinate;
  Edge edge;
  std::size_t first_codeword;
  std::size_t second_codeword;
};

/// Greedy maximal matching over `edges` in (min, max) order, skipping
/// self-loops and edges that touch `avoid`.
std::vector<Edge> greedy_maximal_matching(std::vector<Edge> edges, std::optional<Vertex> avoid = std::nullopt);

/// Splits [n] into T2 (support contains a matching of size >= tau n / 4) and
/// T1 (smooth one-query correctors). Recovery maps are XOR rules.
NormalForm extract_normal_form(const QuerySpec &spec, const StackedHadamardCode &code, double tau);

/// As above, with recovery tables materialized by enumerating `code`; throws
/// ZeroErrorViolation when a kept edge does not determine the coordinate.
NormalForm extract_normal_form(const QuerySpec &spec, const TableCode &code, double tau);

struct T2Failure {
  Position i = 0;
  Edge edge;
  std::size_t codeword = 0;
  Symbol expected = 0;
  Symbol got = 0;
};

struct T1Failure {
  Position i = 0;
  std::size_t codeword = 0;
  Rational success;
};

struct ValidationReport {
  bool passed = true;
  bool sampled = false;
  std::size_t codewords_checked = 0;
  std::vector<T2Failure> t2_failures;
  std::vector<T1Failure> t1_failures;
  /// Smallest T1 success probability seen (1 when T1 is empty).
  Rational min_t1_success{1};
};

/// Checks every recovery map against every codeword and every T1 corrector's
/// 2/3 success bound. Counterexamples are capped at `max_failures` per kind.
ValidationReport validate_zero_error(const NormalForm &nf, const TableCode &code, std::size_t max_failures = 16);

/// Enumerates the code when k <= 20; otherwise checks `samples` random
/// codewords and sets the `sampled` flag.
ValidationReport validate_zero_error(const NormalForm &nf, const StackedHadamardCode &code,
                                     std::size_t samples = 4096, std::uint64_t seed = 1,
                                     std::size_t max_failures = 16);

struct SmoothnessMargin {
  double margin = 0;
  Position i = 0;
  Position v = 0;
};

/// max over T1 coordinates i and positions v of p_v * tau * n / 4.
SmoothnessMargin smoothness_margin(const NormalForm &nf);

} // namespace lcc
