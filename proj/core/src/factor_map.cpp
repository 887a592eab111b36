#include "covent/factor_map.hpp"

#include "covent/error.hpp"

namespace covent {

FactorMap::FactorMap(SystemPtr domain, SystemPtr codomain, int block, std::vector<int> code)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), block_(block), code_(std::move(code)) {
  require(domain_ && codomain_, ErrorCode::InvalidArgument, "factor map needs two systems");
  require(domain_->is_word_system() && codomain_->is_word_system(), ErrorCode::InvalidArgument,
          "factor maps are sliding-block codes between word systems");
  require(block_ >= 1, ErrorCode::InvalidArgument, "block length must be positive");
  blocks_ = Carrier::words(domain_, block_);
  require(code_.size() == blocks_->size(), ErrorCode::InvalidArgument,
          "code table must have one entry per admissible block (" + std::to_string(blocks_->size()) + ")");
  std::vector<char> hit(codomain_->alphabet_size(), 0);
  for (int c : code_) {
    require(c >= 0 && c < codomain_->alphabet_size(), ErrorCode::InvalidArgument,
            "code letter outside the codomain alphabet");
    hit[c] = 1;
  }
  for (std::size_t a = 0; a < hit.size(); ++a)
    require(hit[a] != 0, ErrorCode::InvalidArgument,
            "factor map is not onto codomain letter " + std::to_string(a));
  const auto windows = admissible_words(*domain_, block_ + 1);
  for (const auto& w : windows) {
    const Word img = image(w);
    require(codomain_->admissible(img), ErrorCode::InadmissibleWord,
            "factor map sends an admissible domain word to an inadmissible codomain word");
  }
}

FactorMap FactorMap::from_blocks(SystemPtr domain, SystemPtr codomain, int block,
                                 const std::map<Word, int>& code) {
  const auto blocks = Carrier::words(domain, block);
  std::vector<int> table(blocks->size(), -1);
  for (const auto& [w, letter] : code) table[blocks->index_of(w)] = letter;
  for (std::size_t i = 0; i < table.size(); ++i)
    require(table[i] >= 0, ErrorCode::InvalidArgument, "code missing block " + blocks->label(i));
  return FactorMap(std::move(domain), std::move(codomain), block, std::move(table));
}

FactorMap FactorMap::identity(SystemPtr sys) {
  std::vector<int> code(sys->alphabet_size());
  for (int a = 0; a < sys->alphabet_size(); ++a) code[a] = a;
  SystemPtr cod = sys;
  return FactorMap(std::move(sys), std::move(cod), 1, std::move(code));
}

FactorMap FactorMap::constant(SystemPtr domain) {
  std::vector<int> code(domain->alphabet_size(), 0);
  return FactorMap(std::move(domain), share(SymbolicSystem::full_shift(1)), 1, std::move(code));
}

FactorMap FactorMap::higher_block(SystemPtr domain, int block) {
  const auto blocks = admissible_words(*domain, block);
  const int n = static_cast<int>(blocks.size());
  std::vector<std::vector<int>> t(n, std::vector<int>(n, 0));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      t[u][v] = std::equal(blocks[u].begin() + 1, blocks[u].end(), blocks[v].begin()) &&
                        domain->allows(blocks[u].back(), blocks[v].back())
                    ? 1
                    : 0;
  std::vector<int> code(n);
  for (int j = 0; j < n; ++j) code[j] = j;
  return FactorMap(std::move(domain), share(SymbolicSystem::sft(std::move(t))), block, std::move(code));
}

int FactorMap::letter(std::span<const int> block_word) const {
  return code_[blocks_->index_of(block_word)];
}

Word FactorMap::image(std::span<const int> w) const {
  require(static_cast<int>(w.size()) >= block_, ErrorCode::InvalidArgument,
          "word shorter than the factor map block");
  Word out(w.size() - block_ + 1);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = letter(w.subspan(i, block_));
  return out;
}

}  // namespace covent
