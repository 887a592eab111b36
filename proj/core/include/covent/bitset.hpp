#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace covent {

/// Dynamic bitset over the indices of a finite carrier.
///
/// All set algebra in the library (joins, differences, coverage tests) runs
/// on these. Binary operations require equal sizes; the tail bits beyond
/// size() are kept zero so popcounts and comparisons stay exact.
class BitSet {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  BitSet() = default;
  explicit BitSet(std::size_t size) : size_(size), blocks_((size + 63) / 64, 0) {}

  static BitSet full(std::size_t size);
  static BitSet of(std::size_t size, std::span<const std::size_t> indices);

  std::size_t size() const noexcept { return size_; }

  bool test(std::size_t i) const noexcept {
    return (blocks_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i) noexcept { blocks_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) noexcept { blocks_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  std::size_t count() const noexcept;
  bool any() const noexcept;
  bool none() const noexcept { return !any(); }
  bool all() const noexcept { return count() == size_; }

  BitSet& operator&=(const BitSet& o) noexcept;
  BitSet& operator|=(const BitSet& o) noexcept;
  BitSet& operator^=(const BitSet& o) noexcept;
  /// this := this \ o
  BitSet& subtract(const BitSet& o) noexcept;

  friend BitSet operator&(BitSet a, const BitSet& b) noexcept { return a &= b; }
  friend BitSet operator|(BitSet a, const BitSet& b) noexcept { return a |= b; }
  friend BitSet operator^(BitSet a, const BitSet& b) noexcept { return a ^= b; }
  friend BitSet operator-(BitSet a, const BitSet& b) noexcept { return a.subtract(b); }

  BitSet complement() const;

  bool is_subset_of(const BitSet& o) const noexcept;
  bool intersects(const BitSet& o) const noexcept;

  std::size_t find_first() const noexcept;
  std::size_t find_next(std::size_t i) const noexcept;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      std::uint64_t w = blocks_[b];
      while (w) {
        const int t = std::countr_zero(w);
        f(b * 64 + static_cast<std::size_t>(t));
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> indices() const;

  /// Sum of weights[i] over set bits.
  double weight(std::span<const double> weights) const noexcept;

  std::size_t hash() const noexcept;

  std::span<const std::uint64_t> blocks() const noexcept { return blocks_; }

  bool operator==(const BitSet&) const = default;

  /// Lexicographic order on ascending index lists.
  static bool lex_less(const BitSet& a, const BitSet& b) noexcept;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> blocks_;
};

struct BitSetHash {
  std::size_t operator()(const BitSet& b) const noexcept { return b.hash(); }
};

}  // namespace covent
