#include "lcc/code_core.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <unordered_set>

namespace lcc {

Rng trial_rng(std::uint64_t master_seed, std::uint64_t trial_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(trial_index), static_cast<std::uint32_t>(trial_index >> 32)};
  return Rng(seq);
}

std::size_t hamming_distance(const Word &a, const Word &b) {
  if (a.size() != b.size())
    throw PreconditionError("hamming_distance: length mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d += a[i] != b[i];
  return d;
}

CodeParams CodeParams::make(unsigned k, unsigned b, double delta, unsigned blocks) {
  if (b == 0 || b > 32)
    throw PreconditionError("symbol width b must be in [1, 32]");
  if (blocks == 0)
    throw PreconditionError("blocks must be positive");
  if (k == 0 || k % (b * blocks) != 0)
    throw PreconditionError("b * blocks must divide k");
  if (!(delta > 0.0) || delta > 1.0 / 6 + 1e-12)
    throw PreconditionError("delta must lie in (0, 1/6]");
  CodeParams p;
  p.k = k;
  p.b = b;
  p.blocks = blocks;
  p.r = k / (b * blocks);
  if (p.r > 30)
    throw PreconditionError("block length 2^r too large");
  p.m = std::size_t{1} << p.r;
  p.n = p.m * blocks;
  p.delta = delta;
  return p;
}

Message Message::from_integer(unsigned k, std::uint64_t value) {
  if (k > 64)
    throw PreconditionError("message index representation limited to 64 bits");
  Message m;
  m.bits.resize(k);
  for (unsigned i = 0; i < k; ++i)
    m.bits[i] = (value >> i) & 1u;
  return m;
}

Message Message::random(unsigned k, Rng &rng) {
  Message m;
  m.bits.resize(k);
  for (auto &bit : m.bits)
    bit = static_cast<std::uint8_t>(rng() & 1u);
  return m;
}

std::uint64_t Message::to_integer() const {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < bits.size() && i < 64; ++i)
    v |= static_cast<std::uint64_t>(bits[i] & 1u) << i;
  return v;
}

std::vector<std::uint8_t> hadamard_encode(std::span<const std::uint8_t> y) {
  if (y.empty())
    throw PreconditionError("hadamard_encode: empty message");
  if (y.size() > 30)
    throw PreconditionError("hadamard_encode: message too long");
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    mask |= static_cast<std::uint64_t>(y[i] & 1u) << i;
  std::vector<std::uint8_t> out(std::size_t{1} << y.size());
  for (std::size_t xi = 0; xi < out.size(); ++xi)
    out[xi] = static_cast<std::uint8_t>(std::popcount(mask & xi) & 1);
  return out;
}

StackedHadamardCode::StackedHadamardCode(CodeParams params) : params_(params) {}

std::vector<std::uint64_t> StackedHadamardCode::row_masks(const Message &m) const {
  if (m.bits.size() != params_.k)
    throw PreconditionError("message length does not match k");
  const unsigned per_block = params_.k / params_.blocks;
  std::vector<std::uint64_t> masks(static_cast<std::size_t>(params_.blocks) * params_.b, 0);
  for (unsigned beta = 0; beta < params_.blocks; ++beta)
    for (unsigned i = 0; i < params_.b; ++i)
      for (unsigned j = 0; j < params_.r; ++j)
        if (m.bits[beta * per_block + i * params_.r + j] & 1u)
          masks[beta * params_.b + i] |= std::uint64_t{1} << j;
  return masks;
}

Word StackedHadamardCode::encode(const Message &m) const {
  auto masks = row_masks(m);
  Word w{params_.b, std::vector<Symbol>(params_.n)};
  for (std::size_t a = 0; a < params_.n; ++a) {
    const std::size_t beta = a / params_.m;
    const std::uint64_t xi = a % params_.m;
    Symbol s = 0;
    for (unsigned i = 0; i < params_.b; ++i)
      s |= static_cast<Symbol>(std::popcount(masks[beta * params_.b + i] & xi) & 1) << i;
    w.symbols[a] = s;
  }
  return w;
}

Word StackedHadamardCode::encode_index(std::uint64_t message_index) const {
  return encode(Message::from_integer(params_.k, message_index));
}

std::vector<Word> StackedHadamardCode::enumerate() const {
  if (params_.k > 24)
    throw PreconditionError("refusing to enumerate more than 2^24 codewords");
  std::vector<Word> all;
  all.reserve(std::size_t{1} << params_.k);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << params_.k); ++x)
    all.push_back(encode_index(x));
  return all;
}

Correction correct_with(const CodeParams &params, const Word &received, Position a, Position xi) {
  if (received.size() != params.n)
    throw PreconditionError("received word has wrong length");
  if (a >= params.n)
    throw std::out_of_range("position out of range");
  if (xi >= params.m)
    throw std::out_of_range("xi out of range");
  const Position local = params.local_of(a);
  if (local == 0)
    return {};
  const Position base = static_cast<Position>(params.block_of(a) * params.m);
  Correction c;
  c.queries.count = 2;
  c.queries.first = base + xi;
  c.queries.second = base + (local ^ xi);
  c.symbol = received[c.queries.first] ^ received[c.queries.second];
  return c;
}

Correction local_correct(const CodeParams &params, const Word &received, Position a, Rng &rng) {
  std::uniform_int_distribution<Position> pick(0, static_cast<Position>(params.m - 1));
  return correct_with(params, received, a, pick(rng));
}

CorruptionResult corrupt(const Word &c, const CorruptionPattern &pattern) {
  if (pattern.positions.size() != pattern.replacements.size())
    throw PreconditionError("corruption pattern: positions and replacements differ in length");
  CorruptionResult out{c, {}};
  const Symbol limit = c.bits >= 32 ? 0xffffffffu : ((Symbol{1} << c.bits) - 1);
  for (std::size_t idx = 0; idx < pattern.positions.size(); ++idx) {
    const Position p = pattern.positions[idx];
    if (p >= c.size())
      throw std::out_of_range("corruption position out of range");
    if (pattern.replacements[idx] > limit)
      throw PreconditionError("replacement symbol exceeds alphabet");
    if (pattern.replacements[idx] == c[p])
      out.non_corruptions.push_back(p);
    out.word.symbols[p] = pattern.replacements[idx];
  }
  return out;
}

Rational exact_success_probability(const CodeParams &params, const Word &truth, const Word &received,
                                   Position a) {
  if (truth.size() != params.n)
    throw PreconditionError("reference codeword has wrong length");
  std::int64_t good = 0;
  for (Position xi = 0; xi < params.m; ++xi)
    good += correct_with(params, received, a, xi).symbol == truth[a];
  return Rational(good, static_cast<std::int64_t>(params.m));
}

CorruptionPattern worst_case_pattern(const CodeParams &params, const Word &c, Position a, std::size_t t) {
  if (a >= params.n)
    throw std::out_of_range("position out of range");
  const Position local = params.local_of(a);
  const Position base = static_cast<Position>(params.block_of(a) * params.m);
  CorruptionPattern p;
  // One corrupted position per pair {xi, local ^ xi}: both xi in the pair go bad.
  for (Position xi = 0; xi < params.m && p.positions.size() < t; ++xi) {
    if (local != 0 && (local ^ xi) < xi)
      continue;
    p.positions.push_back(base + xi);
  }
  // Position 0 of a block or t larger than the pair count: fill from other blocks, then anywhere.
  for (Position q = 0; q < params.n && p.positions.size() < t; ++q)
    if (std::find(p.positions.begin(), p.positions.end(), q) == p.positions.end())
      p.positions.push_back(q);
  for (Position q : p.positions)
    p.replacements.push_back(c[q] ^ 1u);
  return p;
}

CorruptionPattern random_pattern(const Word &c, std::size_t t, Rng &rng) {
  if (t > c.size())
    throw PreconditionError("more corruptions than positions");
  std::vector<Position> order(c.size());
  std::iota(order.begin(), order.end(), Position{0});
  for (std::size_t i = 0; i < t; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  CorruptionPattern p;
  const std::uint64_t alphabet = std::uint64_t{1} << c.bits;
  std::uniform_int_distribution<std::uint64_t> offset(1, alphabet - 1);
  for (std::size_t i = 0; i < t; ++i) {
    const Position q = order[i];
    p.positions.push_back(q);
    p.replacements.push_back(static_cast<Symbol>((c[q] + offset(rng)) % alphabet));
  }
  return p;
}

} // namespace lcc
