#pragma once

#include "lcc/rational.hpp"
#include "lcc/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lcc {

/// Parameters of the stacked-Hadamard code.
///
/// The message of k bits is split into `blocks` equal parts. Each part is a
/// b x r bit matrix (r = k / (b * blocks)); row i is Hadamard-encoded and the
/// b encodings are packed bitwise into symbols of {0,1}^b. The blocks are
/// concatenated, so n = blocks * 2^r. With blocks = 1 this is the plain
/// construction with n = 2^(k/b).
///
/// Position a inside a block is identified with xi in {0,1}^r by reading the
/// binary expansion of a least-significant bit first: xi_1 = a & 1,
/// xi_2 = (a >> 1) & 1, and so on.
struct CodeParams {
  unsigned k = 0;
  unsigned b = 0;
  unsigned blocks = 1;
  unsigned r = 0;          // Hadamard message length per row
  std::size_t m = 0;       // block length 2^r
  std::size_t n = 0;       // codeword length
  double delta = 1.0 / 6;  // tolerated corruption fraction

  static CodeParams make(unsigned k, unsigned b, double delta = 1.0 / 6, unsigned blocks = 1);

  std::size_t block_of(Position a) const { return a / m; }
  Position local_of(Position a) const { return static_cast<Position>(a % m); }
  bool enumerable(unsigned max_log2 = 20) const { return k <= max_log2; }
};

/// Message bits x_{i,j}, stored row-major: bit i * (k/b) + j. With several
/// blocks, block beta owns the contiguous slice of k / blocks bits.
struct Message {
  std::vector<std::uint8_t> bits;

  static Message from_integer(unsigned k, std::uint64_t value);
  static Message random(unsigned k, Rng &rng);
  std::uint64_t to_integer() const;
};

struct CorruptionPattern {
  std::vector<Position> positions;
  std::vector<Symbol> replacements;
};

struct CorruptionResult {
  Word word;
  /// Positions whose replacement equals the original symbol.
  std::vector<Position> non_corruptions;
};

/// The queries issued by one call of the local corrector.
struct QueryPair {
  unsigned count = 0;
  Position first = 0;
  Position second = 0;
};

struct Correction {
  Symbol symbol = 0;
  QueryPair queries;
};

/// Hadamard encoding of y in {0,1}^r; entry xi is <y, xi> mod 2.
std::vector<std::uint8_t> hadamard_encode(std::span<const std::uint8_t> y);

class StackedHadamardCode {
public:
  explicit StackedHadamardCode(CodeParams params);

  const CodeParams &params() const { return params_; }
  std::size_t length() const { return params_.n; }
  unsigned symbol_bits() const { return params_.b; }

  Word encode(const Message &m) const;
  Word encode_index(std::uint64_t message_index) const;

  /// All 2^k codewords in message-index order. Refuses k > 24.
  std::vector<Word> enumerate() const;

private:
  /// Row masks of message m: masks[beta * b + i] is row i of block beta.
  std::vector<std::uint64_t> row_masks(const Message &m) const;

  CodeParams params_;
};

/// Runs the corrector for position a with a fixed choice of xi (a local
/// offset inside a's block). Local position 0 always decodes to 0 without
/// reading the word.
Correction correct_with(const CodeParams &params, const Word &received, Position a, Position xi);

/// Two-query local corrector: xi is drawn uniformly from a's block.
Correction local_correct(const CodeParams &params, const Word &received, Position a, Rng &rng);

CorruptionResult corrupt(const Word &c, const CorruptionPattern &pattern);

/// Probability over uniform xi that the corrector applied to `received`
/// returns truth[a]. Computed by enumerating every xi.
Rational exact_success_probability(const CodeParams &params, const Word &truth, const Word &received,
                                   Position a);

/// The pattern of t corruptions maximizing the number of bad xi for position
/// a: corrupted positions lie in distinct corrector pairs {xi, a ^ xi} and
/// flip the lowest symbol bit.
CorruptionPattern worst_case_pattern(const CodeParams &params, const Word &c, Position a, std::size_t t);

/// t distinct positions with uniformly random replacement symbols that
/// differ from the original.
CorruptionPattern random_pattern(const Word &c, std::size_t t, Rng &rng);

} // namespace lcc
