#pragma once

#include "lcc/code_core.hpp"
#include "lcc/normal_form.hpp"
#include "lcc/types.hpp"

#include <cstdint>
#include <vector>

namespace lcc {

using BitWord = std::vector<std::uint8_t>;

/// Binary code {0,1}^s -> {0,1}^t given by its table.
struct InnerCode {
  std::string name = "table";
  unsigned s = 0;
  unsigned t = 0;
  std::vector<BitWord> table; // 2^s entries of t bits
  double delta0 = 0;          // relative minimum distance

  /// Hadamard code on s bits: bit xi of the encoding of x is <x, xi> mod 2.
  static InnerCode hadamard(unsigned s);
  static InnerCode identity(unsigned s);
  /// Validates widths and injectivity and computes delta0.
  static InnerCode from_table(unsigned s, std::vector<BitWord> table, std::string name = "table");

  const BitWord &encode(Symbol x) const { return table.at(x); }
};

struct DistanceReport {
  double fraction = 1.0;
  std::size_t distance = 0;
  std::size_t length = 0;
  bool single_codeword = false; // fraction defined as 1
  bool duplicate = false;       // two equal codewords, fraction 0
  std::size_t first = 0;        // a closest pair
  std::size_t second = 0;
};

DistanceReport min_distance(const std::vector<Word> &code);
DistanceReport min_distance(const std::vector<BitWord> &code);

/// Inner encoding of every symbol of w, block after block.
BitWord concat_encode(const Word &w, const InnerCode &inner);

struct ConcatenatedCode {
  std::size_t outer_n = 0;
  unsigned t = 0;
  std::vector<BitWord> words;
  std::vector<std::size_t> outer_index; // words[j] encodes outer codeword outer_index[j]

  std::size_t length() const { return outer_n * t; }
};

ConcatenatedCode concatenate(const TableCode &outer, const InnerCode &inner);

struct ShatterResult {
  std::vector<std::size_t> I; // ascending
  /// certificate[p] is the smallest codeword index whose restriction to I is
  /// p, where bit j of p is the value at I[j].
  std::vector<std::size_t> certificate;
  std::size_t max_dim = 0;
  std::size_t upper_bound = 0; // min(max_dim, floor(log2 |C|))
  bool capped = false;         // max_dim stopped the search below floor(log2 |C|)
  std::size_t examined = 0;    // index sets tested
  double dudley_floor = 0;     // log2 |C| / log2(2 / eps), eps = sqrt(relative distance)
  bool meets_floor = false;
};

/// Largest shattered index set, searched depth-first in lexicographic order.
/// Only shattered sets are extended, so any superset of a failed set is
/// skipped. Among maximum sets the lexicographically smallest is returned.
ShatterResult brute_force_vc(const ConcatenatedCode &c1, std::size_t max_dim);

/// True when the certificate realizes all 2^|I| patterns on I.
bool verify_shattering(const ConcatenatedCode &c1, const std::vector<std::size_t> &I,
                       const std::vector<std::size_t> &certificate);

struct LdcConstruction {
  CodeParams outer;
  InnerCode inner;
  std::vector<std::size_t> I;
  std::vector<std::size_t> block_of;
  std::vector<unsigned> offset;
  std::vector<Word> representatives;          // C'(x) for x in [2^|I|]
  std::vector<std::size_t> representative_of; // index into the outer code

  std::size_t message_bits() const { return I.size(); }
  const Word &encode(std::uint64_t x) const { return representatives.at(x); }
};

/// For each x in {0,1}^I, the lexicographically smallest outer codeword z
/// with C0(z) restricted to I equal to x.
LdcConstruction build_ldc(const StackedHadamardCode &outer_code, const TableCode &outer, const InnerCode &inner,
                          const std::vector<std::size_t> &I);

struct LdcDecode {
  std::uint8_t bit = 0;
  QueryPair queries;
};

/// Decodes the message bit carried by concatenated position i (which must be
/// in I) with one run of the outer local corrector.
LdcDecode ldc_decode(const LdcConstruction &ldc, const Word &received, std::size_t i, Rng &rng);

struct LdcTrialSummary {
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t corruptions = 0;
  bool always_two_queries = true;
  double success_rate() const { return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0; }
};

/// Each trial: random message, floor(delta n) random corruptions of its
/// encoding, one decode of a random message bit.
LdcTrialSummary run_ldc_trials(const LdcConstruction &ldc, double delta, std::size_t trials,
                               std::uint64_t master_seed, std::size_t workers = 0);

} // namespace lcc
