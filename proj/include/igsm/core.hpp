#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace igsm {

//---------------------------------------------------------------------------
// Errors
//---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration, vocabulary pack or flag combination.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Rejection sampling ran out of its attempt budget.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Unknown parameter id or name.
class LookupError : public Error {
 public:
  using Error::Error;
};

// An operand is not available when evaluating a rule.
class UnresolvedOperandError : public Error {
 public:
  using Error::Error;
};

// Text-level failure carrying the offending byte offset.
class PositionedError : public Error {
 public:
  PositionedError(std::size_t offset, const std::string& what)
      : Error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset), reason_(what) {}
  std::size_t offset() const noexcept { return offset_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t offset_;
  std::string reason_;
};

class ParseError : public PositionedError {
 public:
  using PositionedError::PositionedError;
};

class TokenizeError : public PositionedError {
 public:
  using PositionedError::PositionedError;
};

//---------------------------------------------------------------------------
// Deterministic randomness
//
// std::mt19937_64 is fully specified by the standard, the distributions are
// not, so the draws below are written out to stay bit-identical across
// standard libraries.
//---------------------------------------------------------------------------

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Mixes a base seed with any number of stream tags.
template <typename... Tags>
constexpr std::uint64_t derive_seed(std::uint64_t seed, Tags... tags) noexcept {
  std::uint64_t h = splitmix64(seed);
  ((h = splitmix64(h ^ static_cast<std::uint64_t>(tags))), ...);
  return h;
}

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ull) noexcept {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform integer in [lo, hi].
  int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1)); }

  // Uniform double in [0, 1) with 53 bits of precision.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

  // Index drawn proportionally to non-negative weights; weights must not all be zero.
  std::size_t weighted(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double r = unit() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (r < weights[i]) return i;
      r -= weights[i];
    }
    for (std::size_t i = weights.size(); i > 0; --i) {
      if (weights[i - 1] > 0) return i - 1;
    }
    return 0;
  }

 private:
  std::mt19937_64 engine_;
};

//---------------------------------------------------------------------------
// Parameter handles
//---------------------------------------------------------------------------

struct ParamId {
  std::uint32_t index = 0;
  friend constexpr auto operator<=>(ParamId, ParamId) = default;
};

// Dense bitset over parameter ids.
class ParamSet {
 public:
  ParamSet() = default;
  explicit ParamSet(std::size_t universe) : bits_((universe + 63) / 64, 0), universe_(universe) {}

  std::size_t universe() const noexcept { return universe_; }

  bool contains(ParamId id) const noexcept {
    return id.index < universe_ && ((bits_[id.index / 64] >> (id.index % 64)) & 1u);
  }
  void insert(ParamId id) { bits_.at(id.index / 64) |= (std::uint64_t{1} << (id.index % 64)); }
  void erase(ParamId id) { bits_.at(id.index / 64) &= ~(std::uint64_t{1} << (id.index % 64)); }

  ParamSet& operator|=(const ParamSet& o) {
    for (std::size_t i = 0; i < bits_.size() && i < o.bits_.size(); ++i) bits_[i] |= o.bits_[i];
    return *this;
  }

  std::size_t size() const noexcept {
    std::size_t n = 0;
    for (auto w : bits_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool empty() const noexcept { return size() == 0; }

  std::vector<ParamId> ids() const {
    std::vector<ParamId> out;
    for (std::uint32_t i = 0; i < universe_; ++i) {
      if (contains(ParamId{i})) out.push_back(ParamId{i});
    }
    return out;
  }

  friend bool operator==(const ParamSet&, const ParamSet&) = default;

 private:
  std::vector<std::uint64_t> bits_;
  std::size_t universe_ = 0;
};

// Single-letter names used for parameters and intermediates.
inline constexpr std::string_view kLetterPool = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

inline bool is_pool_letter(char c) noexcept { return kLetterPool.find(c) != std::string_view::npos; }

}  // namespace igsm
