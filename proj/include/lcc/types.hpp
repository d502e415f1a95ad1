#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcc {

using Symbol = std::uint32_t;
using Position = std::uint32_t;
using Vertex = std::uint32_t;

/// Deterministic random source used by every randomized operation.
using Rng = std::mt19937_64;

/// Derives an independent stream for one trial of a seeded experiment.
Rng trial_rng(std::uint64_t master_seed, std::uint64_t trial_index);

/// A word over the alphabet {0,1}^bits. Codewords, received words and
/// oracle contents all share this representation.
struct Word {
  unsigned bits = 1;
  std::vector<Symbol> symbols;

  std::size_t size() const { return symbols.size(); }
  Symbol operator[](std::size_t i) const { return symbols[i]; }
  bool operator==(const Word &) const = default;
};

std::size_t hamming_distance(const Word &a, const Word &b);

/// Unordered pair of positions, stored with first <= second.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}
  bool touches(Vertex x) const { return u == x || v == x; }
  auto operator<=>(const Edge &) const = default;
};

/// Input rejected by an operation's precondition.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An internal guarantee failed. Reaching one of these means either a bug or
/// an input that does not have the structure the algorithm assumes.
class InvariantError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace lcc
