#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "covent/systems.hpp"

namespace covent {

class Carrier;
using CarrierPtr = std::shared_ptr<const Carrier>;

/// The finite universe that set families live on.
///
/// A word carrier holds the admissible words of one window length L in
/// lexicographic order; each word stands for its cylinder [w] at
/// coordinates 0..L-1. A point carrier holds the points of a permutation
/// system. Sets are BitSets over carrier indices.
///
/// Carriers are interned: words(sys, L) returns the same object for the
/// same system object and window while any reference is alive.
class Carrier {
 public:
  static CarrierPtr words(const SystemPtr& sys, int window);
  static CarrierPtr points(const SystemPtr& sys);
  /// Word carrier for word systems, point carrier for permutations.
  static CarrierPtr base(const SystemPtr& sys);

  bool is_points() const noexcept { return window_ == 0; }
  const SystemPtr& system() const noexcept { return system_; }
  /// Window length; 0 for point carriers.
  int window() const noexcept { return window_; }
  std::size_t size() const noexcept { return size_; }

  std::span<const int> word(std::size_t i) const {
    return {symbols_.data() + i * static_cast<std::size_t>(window_), static_cast<std::size_t>(window_)};
  }
  std::optional<std::size_t> find(std::span<const int> w) const;
  /// Index of the given point or word; throws InadmissibleWord if absent.
  std::size_t index_of(std::span<const int> w) const;

  /// Digit-string rendering of a word ("0110"), or the point number.
  std::string label(std::size_t i) const;

  /// Same system (by value) and same window.
  bool same_as(const Carrier& o) const noexcept;

  Carrier(SystemPtr sys, int window, std::vector<int> symbols, std::size_t size);

 private:
  SystemPtr system_;
  int window_ = 0;
  std::vector<int> symbols_;
  std::size_t size_ = 0;
};

void require_same_carrier(const Carrier& a, const Carrier& b, const char* where);

}  // namespace covent
