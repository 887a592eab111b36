#pragma once

#include <map>
#include <span>
#include <vector>

#include "covent/carrier.hpp"
#include "covent/systems.hpp"

namespace covent {

/// A sliding-block code phi: X -> Y between word systems.
///
/// phi(x)_i = code(x_i ... x_{i+b-1}). The code is a table indexed by the
/// admissible b-words of the domain in lexicographic order. Construction
/// checks that the image of every admissible domain (b+1)-word is an
/// admissible codomain 2-word, which makes S o phi = phi o T hold, and that
/// every codomain letter is hit.
class FactorMap {
 public:
  FactorMap(SystemPtr domain, SystemPtr codomain, int block, std::vector<int> code);

  static FactorMap from_blocks(SystemPtr domain, SystemPtr codomain, int block,
                               const std::map<Word, int>& code);
  static FactorMap identity(SystemPtr sys);
  /// The code onto the one-letter full shift.
  static FactorMap constant(SystemPtr domain);
  /// Higher-block presentation: Y has the admissible b-words of X as
  /// letters (letter j = admissible_words(X, b)[j]), and phi is the
  /// bijective recoding x -> (x_i..x_{i+b-1})_i.
  static FactorMap higher_block(SystemPtr domain, int block);

  const SystemPtr& domain() const noexcept { return domain_; }
  const SystemPtr& codomain() const noexcept { return codomain_; }
  int block() const noexcept { return block_; }
  const std::vector<int>& code() const noexcept { return code_; }

  int letter(std::span<const int> block_word) const;
  /// Image word of length |w| - b + 1.
  Word image(std::span<const int> w) const;

 private:
  SystemPtr domain_;
  SystemPtr codomain_;
  int block_ = 1;
  std::vector<int> code_;
  CarrierPtr blocks_;
};

}  // namespace covent
