#include "lcc/ldc_bridge.hpp"

#include "lcc/parallel.hpp"

#include <bit>
#include <cmath>
#include <set>

namespace lcc {

namespace {

constexpr std::size_t kMaxPairwise = std::size_t{1} << 14;

template <class W, class Dist> DistanceReport pairwise(const std::vector<W> &code, Dist dist) {
  if (code.size() > kMaxPairwise)
    throw PreconditionError("min_distance: more than 2^14 codewords");
  DistanceReport r;
  if (code.empty())
    throw PreconditionError("min_distance: empty code");
  r.length = code.front().size();
  if (code.size() == 1) {
    r.single_codeword = true;
    r.distance = r.length;
    return r;
  }
  r.distance = std::numeric_limits<std::size_t>::max();
  for (std::size_t a = 0; a < code.size(); ++a)
    for (std::size_t b = a + 1; b < code.size(); ++b) {
      if (code[b].size() != r.length)
        throw PreconditionError("min_distance: codewords differ in length");
      const std::size_t d = dist(code[a], code[b]);
      if (d < r.distance) {
        r.distance = d;
        r.first = a;
        r.second = b;
      }
    }
  r.duplicate = r.distance == 0;
  r.fraction = r.length ? static_cast<double>(r.distance) / static_cast<double>(r.length) : 0;
  return r;
}

} // namespace

InnerCode InnerCode::from_table(unsigned s, std::vector<BitWord> table, std::string name) {
  if (s == 0 || s > 16)
    throw PreconditionError("inner code: input width must be in [1, 16]");
  if (table.size() != (std::size_t{1} << s))
    throw PreconditionError("inner code: table must have 2^s entries");
  InnerCode c;
  c.name = std::move(name);
  c.s = s;
  c.t = static_cast<unsigned>(table.front().size());
  if (c.t == 0)
    throw PreconditionError("inner code: empty output");
  for (const auto &row : table) {
    if (row.size() != c.t)
      throw PreconditionError("inner code: rows differ in length");
    for (auto bit : row)
      if (bit > 1)
        throw PreconditionError("inner code: entries must be bits");
  }
  const DistanceReport d = min_distance(table);
  if (d.duplicate)
    throw PreconditionError("inner code is not injective");
  c.delta0 = d.fraction;
  c.table = std::move(table);
  return c;
}

InnerCode InnerCode::hadamard(unsigned s) {
  const std::size_t t = std::size_t{1} << s;
  std::vector<BitWord> table(t, BitWord(t));
  for (std::size_t x = 0; x < t; ++x)
    for (std::size_t xi = 0; xi < t; ++xi)
      table[x][xi] = static_cast<std::uint8_t>(std::popcount(x & xi) & 1);
  return from_table(s, std::move(table), "hadamard");
}

InnerCode InnerCode::identity(unsigned s) {
  const std::size_t size = std::size_t{1} << s;
  std::vector<BitWord> table(size, BitWord(s));
  for (std::size_t x = 0; x < size; ++x)
    for (unsigned o = 0; o < s; ++o)
      table[x][o] = static_cast<std::uint8_t>((x >> o) & 1u);
  return from_table(s, std::move(table), "identity");
}

DistanceReport min_distance(const std::vector<Word> &code) {
  return pairwise(code, [](const Word &a, const Word &b) { return hamming_distance(a, b); });
}

DistanceReport min_distance(const std::vector<BitWord> &code) {
  return pairwise(code, [](const BitWord &a, const BitWord &b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      d += a[i] != b[i];
    return d;
  });
}

BitWord concat_encode(const Word &w, const InnerCode &inner) {
  if (w.bits != inner.s)
    throw PreconditionError("concatenate: inner width " + std::to_string(inner.s) + " does not match symbol width " +
                            std::to_string(w.bits));
  BitWord out;
  out.reserve(w.size() * inner.t);
  for (Symbol s : w.symbols) {
    const auto &block = inner.encode(s);
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

ConcatenatedCode concatenate(const TableCode &outer, const InnerCode &inner) {
  if (outer.bits != inner.s)
    throw PreconditionError("concatenate: inner width " + std::to_string(inner.s) + " does not match symbol width " +
                            std::to_string(outer.bits));
  ConcatenatedCode c;
  c.outer_n = outer.n;
  c.t = inner.t;
  c.words.reserve(outer.codewords.size());
  for (std::size_t j = 0; j < outer.codewords.size(); ++j) {
    c.words.push_back(concat_encode(outer.codewords[j], inner));
    c.outer_index.push_back(j);
  }
  return c;
}

namespace {

struct VcSearch {
  const ConcatenatedCode &code;
  std::size_t upper;
  std::vector<std::size_t> current;
  std::vector<std::size_t> best;
  std::vector<std::uint32_t> seen;
  std::uint32_t stamp = 0;
  std::size_t examined = 0;

  // patterns[c] = restriction of codeword c to `current`
  void run(std::size_t start, const std::vector<std::uint32_t> &patterns) {
    const std::size_t length = code.length();
    const std::size_t depth = current.size();
    const std::size_t need = std::size_t{1} << (depth + 1);
    std::vector<std::uint32_t> next(patterns.size());
    for (std::size_t p = start; p < length; ++p) {
      if (best.size() >= upper)
        return;
      if (depth + (length - p) <= best.size())
        return;
      ++examined;
      ++stamp;
      std::size_t distinct = 0;
      for (std::size_t c = 0; c < patterns.size(); ++c) {
        next[c] = patterns[c] | (static_cast<std::uint32_t>(code.words[c][p]) << depth);
        if (seen[next[c]] != stamp) {
          seen[next[c]] = stamp;
          ++distinct;
        }
      }
      if (distinct != need)
        continue;
      current.push_back(p);
      if (current.size() > best.size())
        best = current;
      run(p + 1, next);
      current.pop_back();
    }
  }
};

} // namespace

ShatterResult brute_force_vc(const ConcatenatedCode &c1, std::size_t max_dim) {
  if (max_dim > 20)
    throw PreconditionError("brute_force_vc: max_dim must be at most 20");
  if (c1.words.empty())
    throw PreconditionError("brute_force_vc: empty code");
  ShatterResult res;
  res.max_dim = max_dim;
  const auto log_size = static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(c1.words.size())) + 1e-12));
  res.upper_bound = std::min(max_dim, log_size);
  VcSearch search{c1, res.upper_bound, {}, {}, std::vector<std::uint32_t>(std::size_t{1} << std::max<std::size_t>(res.upper_bound, 1), 0)};
  if (res.upper_bound > 0)
    search.run(0, std::vector<std::uint32_t>(c1.words.size(), 0));
  res.I = search.best;
  res.examined = search.examined;
  res.capped = max_dim < log_size && res.I.size() == max_dim;

  res.certificate.assign(std::size_t{1} << res.I.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t c = 0; c < c1.words.size(); ++c) {
    std::size_t p = 0;
    for (std::size_t j = 0; j < res.I.size(); ++j)
      p |= static_cast<std::size_t>(c1.words[c][res.I[j]]) << j;
    if (res.certificate[p] == std::numeric_limits<std::size_t>::max())
      res.certificate[p] = c;
  }

  const DistanceReport d = min_distance(c1.words);
  if (!d.single_codeword && !d.duplicate) {
    const double eps = std::sqrt(d.fraction);
    res.dudley_floor = std::log2(static_cast<double>(c1.words.size())) / std::log2(2 / eps);
    res.meets_floor = static_cast<double>(res.I.size()) >= res.dudley_floor - 1e-12;
  }
  return res;
}

bool verify_shattering(const ConcatenatedCode &c1, const std::vector<std::size_t> &I,
                       const std::vector<std::size_t> &certificate) {
  if (I.size() > 20 || certificate.size() != (std::size_t{1} << I.size()))
    return false;
  for (std::size_t p = 0; p < certificate.size(); ++p) {
    if (certificate[p] >= c1.words.size())
      return false;
    const BitWord &w = c1.words[certificate[p]];
    for (std::size_t j = 0; j < I.size(); ++j)
      if (I[j] >= w.size() || w[I[j]] != ((p >> j) & 1u))
        return false;
  }
  return true;
}

LdcConstruction build_ldc(const StackedHadamardCode &outer_code, const TableCode &outer, const InnerCode &inner,
                          const std::vector<std::size_t> &I) {
  if (outer.n != outer_code.length() || outer.bits != outer_code.symbol_bits())
    throw PreconditionError("build_ldc: code table does not match the outer code");
  if (outer.bits != inner.s)
    throw PreconditionError("build_ldc: inner width does not match symbol width");
  if (I.size() > 20)
    throw PreconditionError("build_ldc: index set too large");
  const std::size_t length = outer.n * inner.t;
  for (std::size_t j = 0; j < I.size(); ++j) {
    if (I[j] >= length)
      throw PreconditionError("build_ldc: index out of range");
    if (j > 0 && I[j] <= I[j - 1])
      throw PreconditionError("build_ldc: index set must be strictly increasing");
  }

  LdcConstruction ldc;
  ldc.outer = outer_code.params();
  ldc.inner = inner;
  ldc.I = I;
  for (std::size_t i : I) {
    ldc.block_of.push_back(i / inner.t);
    ldc.offset.push_back(static_cast<unsigned>(i % inner.t));
  }
  const std::size_t patterns = std::size_t{1} << I.size();
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  ldc.representative_of.assign(patterns, none);
  for (std::size_t c = 0; c < outer.codewords.size(); ++c) {
    const Word &z = outer.codewords[c];
    std::size_t p = 0;
    for (std::size_t j = 0; j < I.size(); ++j)
      p |= static_cast<std::size_t>(inner.encode(z[ldc.block_of[j]])[ldc.offset[j]]) << j;
    auto &slot = ldc.representative_of[p];
    if (slot == none || z.symbols < outer.codewords[slot].symbols)
      slot = c;
  }
  for (std::size_t p = 0; p < patterns; ++p) {
    if (ldc.representative_of[p] == none) {
      std::string bits;
      for (std::size_t j = 0; j < I.size(); ++j)
        bits += ((p >> j) & 1u) ? '1' : '0';
      throw PreconditionError("build_ldc: index set is not shattered; pattern " + bits + " is missing");
    }
    ldc.representatives.push_back(outer.codewords[ldc.representative_of[p]]);
  }
  return ldc;
}

LdcDecode ldc_decode(const LdcConstruction &ldc, const Word &received, std::size_t i, Rng &rng) {
  auto it = std::lower_bound(ldc.I.begin(), ldc.I.end(), i);
  if (it == ldc.I.end() || *it != i)
    throw PreconditionError("ldc_decode: position " + std::to_string(i) + " is not in I");
  const auto j = static_cast<std::size_t>(it - ldc.I.begin());
  const Correction c = local_correct(ldc.outer, received, static_cast<Position>(ldc.block_of[j]), rng);
  return {ldc.inner.encode(c.symbol)[ldc.offset[j]], c.queries};
}

LdcTrialSummary run_ldc_trials(const LdcConstruction &ldc, double delta, std::size_t trials,
                               std::uint64_t master_seed, std::size_t workers) {
  if (ldc.I.empty())
    throw PreconditionError("run_ldc_trials: empty message");
  if (delta < 0 || delta > 1)
    throw PreconditionError("run_ldc_trials: delta must lie in [0, 1]");
  LdcTrialSummary s;
  s.trials = trials;
  s.corruptions = static_cast<std::size_t>(std::floor(delta * static_cast<double>(ldc.outer.n) + 1e-9));
  std::vector<std::uint8_t> ok(trials, 0), two(trials, 0);
  const std::size_t k = ldc.I.size();
  parallel_for(
      trials,
      [&](std::size_t t) {
        Rng rng = trial_rng(master_seed, t);
        std::uniform_int_distribution<std::uint64_t> msg(0, (std::uint64_t{1} << k) - 1);
        std::uniform_int_distribution<std::size_t> coord(0, k - 1);
        const std::uint64_t x = msg(rng);
        const Word &z = ldc.encode(x);
        const Word received = corrupt(z, random_pattern(z, s.corruptions, rng)).word;
        const std::size_t j = coord(rng);
        const LdcDecode d = ldc_decode(ldc, received, ldc.I[j], rng);
        ok[t] = d.bit == ((x >> j) & 1u);
        two[t] = d.queries.count == 2;
      },
      workers);
  for (std::size_t t = 0; t < trials; ++t) {
    s.successes += ok[t];
    s.always_two_queries = s.always_two_queries && two[t];
  }
  return s;
}

} // namespace lcc
