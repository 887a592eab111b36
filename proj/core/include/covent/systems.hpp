#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace covent {

enum class SystemKind { FullShift, SFT, Permutation };

/// A finite word over the alphabet {0, ..., k-1}.
using Word = std::vector<int>;

/// The phase space and map of a finite symbolic dynamical system.
///
/// Three backends share one type: the full shift on k letters, a one-step
/// subshift of finite type given by a 0/1 transition matrix, and a
/// permutation of a finite point set. Word-based operations accept the
/// first two; point-based operations accept all three (permutations are
/// the only point systems).
///
/// SFT matrices must be essential: every letter has at least one successor
/// and one predecessor. Under that condition every admissible word extends
/// to a bi-infinite path, so the admissible words of length n are exactly
/// the n-cylinders of the shift space.
class SymbolicSystem {
 public:
  static SymbolicSystem full_shift(int alphabet_size);
  static SymbolicSystem sft(std::vector<std::vector<int>> transition);
  static SymbolicSystem permutation(std::vector<int> table);

  SystemKind kind() const noexcept { return kind_; }
  bool is_word_system() const noexcept { return kind_ != SystemKind::Permutation; }

  /// Number of letters (word systems) or points (permutations).
  int alphabet_size() const noexcept { return size_; }
  int point_count() const noexcept { return size_; }

  bool allows(int a, int b) const noexcept { return transition_[a * size_ + b] != 0; }
  bool admissible(std::span<const int> word) const noexcept;

  /// Transition matrix as nested rows (all ones for the full shift).
  std::vector<std::vector<int>> transition() const;

  /// Permutation table: point i maps to table()[i].
  const std::vector<int>& table() const noexcept { return table_; }
  int image(int point) const { return table_[point]; }

  /// Cycles of a permutation, each listed from its least point, ordered by
  /// least point.
  std::vector<std::vector<int>> cycles() const;

  /// True when the transition graph is strongly connected.
  bool irreducible() const;

  std::string describe() const;

  /// Word systems compare by transition matrix, so the full shift equals
  /// the SFT with the all-ones matrix.
  friend bool operator==(const SymbolicSystem& a, const SymbolicSystem& b) noexcept;

 private:
  SymbolicSystem() = default;

  SystemKind kind_ = SystemKind::FullShift;
  int size_ = 0;
  std::vector<unsigned char> transition_;
  std::vector<int> table_;
};

using SystemPtr = std::shared_ptr<const SymbolicSystem>;

inline SystemPtr share(SymbolicSystem sys) {
  return std::make_shared<const SymbolicSystem>(std::move(sys));
}

/// Admissible words of length n in lexicographic order.
std::vector<Word> admissible_words(const SymbolicSystem& sys, int n);

/// Number of admissible words of length n, by transfer-matrix recursion.
double count_admissible_words(const SymbolicSystem& sys, int n);

/// (1/n_max) log #(admissible words of length n_max). An upper-bound proxy
/// for the topological entropy, converging to the log of the spectral
/// radius of the transition matrix.
double word_count_growth(const SymbolicSystem& sys, int n_max);

/// The M-th power T^M acting on non-overlapping M-blocks. For word
/// systems, letter j of the result is admissible_words(sys, M)[j] and u->v
/// is allowed iff the concatenation uv is admissible. A power word of
/// length n therefore encodes an admissible word of length n*M.
SymbolicSystem power_system(const SymbolicSystem& sys, int M);

}  // namespace covent
