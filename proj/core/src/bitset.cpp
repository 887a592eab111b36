#include "covent/bitset.hpp"

#include <cassert>

namespace covent {

BitSet BitSet::full(std::size_t size) {
  BitSet b(size);
  for (auto& w : b.blocks_) w = ~std::uint64_t{0};
  if (size % 64 != 0 && !b.blocks_.empty()) {
    b.blocks_.back() = (std::uint64_t{1} << (size % 64)) - 1;
  }
  return b;
}

BitSet BitSet::of(std::size_t size, std::span<const std::size_t> indices) {
  BitSet b(size);
  for (auto i : indices) b.set(i);
  return b;
}

std::size_t BitSet::count() const noexcept {
  std::size_t n = 0;
  for (auto w : blocks_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool BitSet::any() const noexcept {
  for (auto w : blocks_)
    if (w) return true;
  return false;
}

BitSet& BitSet::operator&=(const BitSet& o) noexcept {
  assert(size_ == o.size_);
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] &= o.blocks_[i];
  return *this;
}

BitSet& BitSet::operator|=(const BitSet& o) noexcept {
  assert(size_ == o.size_);
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] |= o.blocks_[i];
  return *this;
}

BitSet& BitSet::operator^=(const BitSet& o) noexcept {
  assert(size_ == o.size_);
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] ^= o.blocks_[i];
  return *this;
}

BitSet& BitSet::subtract(const BitSet& o) noexcept {
  assert(size_ == o.size_);
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] &= ~o.blocks_[i];
  return *this;
}

BitSet BitSet::complement() const {
  BitSet c = full(size_);
  c.subtract(*this);
  return c;
}

bool BitSet::is_subset_of(const BitSet& o) const noexcept {
  assert(size_ == o.size_);
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    if (blocks_[i] & ~o.blocks_[i]) return false;
  return true;
}

bool BitSet::intersects(const BitSet& o) const noexcept {
  assert(size_ == o.size_);
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    if (blocks_[i] & o.blocks_[i]) return true;
  return false;
}

std::size_t BitSet::find_first() const noexcept {
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    if (blocks_[b]) return b * 64 + static_cast<std::size_t>(std::countr_zero(blocks_[b]));
  return npos;
}

std::size_t BitSet::find_next(std::size_t i) const noexcept {
  ++i;
  if (i >= size_) return npos;
  std::size_t b = i >> 6;
  std::uint64_t w = blocks_[b] & (~std::uint64_t{0} << (i & 63));
  while (true) {
    if (w) return b * 64 + static_cast<std::size_t>(std::countr_zero(w));
    if (++b >= blocks_.size()) return npos;
    w = blocks_[b];
  }
}

std::vector<std::size_t> BitSet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for_each([&](std::size_t i) { out.push_back(i); });
  return out;
}

double BitSet::weight(std::span<const double> weights) const noexcept {
  double s = 0.0;
  for_each([&](std::size_t i) { s += weights[i]; });
  return s;
}

std::size_t BitSet::hash() const noexcept {
  // FNV-1a over the blocks, mixed with the size.
  std::uint64_t h = 1469598103934665603ull ^ size_;
  for (auto w : blocks_) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

bool BitSet::lex_less(const BitSet& a, const BitSet& b) noexcept {
  std::size_t i = a.find_first();
  std::size_t j = b.find_first();
  while (i != npos && j != npos) {
    if (i != j) return i < j;
    i = a.find_next(i);
    j = b.find_next(j);
  }
  return i == npos && j != npos;
}

}  // namespace covent
