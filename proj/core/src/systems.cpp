#include "covent/systems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "covent/error.hpp"

namespace covent {

namespace {

bool strongly_connected(int n, const std::vector<unsigned char>& t) {
  if (n == 0) return false;
  auto reach = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        const bool edge = forward ? t[u * n + v] : t[v * n + u];
        if (edge && !seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  return reach(true) && reach(false);
}

}  // namespace

SymbolicSystem SymbolicSystem::full_shift(int alphabet_size) {
  require(alphabet_size >= 1, ErrorCode::InvalidArgument, "full shift needs at least one letter");
  SymbolicSystem s;
  s.kind_ = SystemKind::FullShift;
  s.size_ = alphabet_size;
  s.transition_.assign(static_cast<std::size_t>(alphabet_size) * alphabet_size, 1);
  return s;
}

SymbolicSystem SymbolicSystem::sft(std::vector<std::vector<int>> transition) {
  const int k = static_cast<int>(transition.size());
  require(k >= 1, ErrorCode::InvalidArgument, "SFT transition matrix is empty");
  SymbolicSystem s;
  s.kind_ = SystemKind::SFT;
  s.size_ = k;
  s.transition_.assign(static_cast<std::size_t>(k) * k, 0);
  for (int a = 0; a < k; ++a) {
    require(static_cast<int>(transition[a].size()) == k, ErrorCode::InvalidArgument,
            "SFT transition matrix is not square");
    for (int b = 0; b < k; ++b) {
      const int v = transition[a][b];
      require(v == 0 || v == 1, ErrorCode::InvalidArgument, "SFT transition entries must be 0 or 1");
      s.transition_[a * k + b] = static_cast<unsigned char>(v);
    }
  }
  for (int a = 0; a < k; ++a) {
    bool row = false, col = false;
    for (int b = 0; b < k; ++b) {
      row = row || s.transition_[a * k + b];
      col = col || s.transition_[b * k + a];
    }
    require(row && col, ErrorCode::InvalidArgument,
            "SFT letter " + std::to_string(a) + " is not essential (zero row or column)");
  }
  return s;
}

SymbolicSystem SymbolicSystem::permutation(std::vector<int> table) {
  const int n = static_cast<int>(table.size());
  require(n >= 1, ErrorCode::InvalidArgument, "permutation on an empty point set");
  std::vector<char> hit(n, 0);
  for (int v : table) {
    require(v >= 0 && v < n && !hit[v], ErrorCode::InvalidArgument, "permutation table is not a bijection");
    hit[v] = 1;
  }
  SymbolicSystem s;
  s.kind_ = SystemKind::Permutation;
  s.size_ = n;
  s.table_ = std::move(table);
  return s;
}

bool SymbolicSystem::admissible(std::span<const int> word) const noexcept {
  if (!is_word_system()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] < 0 || word[i] >= size_) return false;
    if (i > 0 && !allows(word[i - 1], word[i])) return false;
  }
  return true;
}

std::vector<std::vector<int>> SymbolicSystem::transition() const {
  std::vector<std::vector<int>> out(size_, std::vector<int>(size_, 0));
  if (!is_word_system()) return out;
  for (int a = 0; a < size_; ++a)
    for (int b = 0; b < size_; ++b) out[a][b] = allows(a, b) ? 1 : 0;
  return out;
}

std::vector<std::vector<int>> SymbolicSystem::cycles() const {
  require(kind_ == SystemKind::Permutation, ErrorCode::InvalidArgument, "cycles() needs a permutation system");
  std::vector<std::vector<int>> out;
  std::vector<char> seen(size_, 0);
  for (int p = 0; p < size_; ++p) {
    if (seen[p]) continue;
    std::vector<int> cyc;
    for (int q = p; !seen[q]; q = table_[q]) {
      seen[q] = 1;
      cyc.push_back(q);
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

bool SymbolicSystem::irreducible() const {
  if (kind_ == SystemKind::Permutation) return cycles().size() == 1;
  return strongly_connected(size_, transition_);
}

std::string SymbolicSystem::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case SystemKind::FullShift: os << "full shift on " << size_ << " letters"; break;
    case SystemKind::SFT: os << "SFT on " << size_ << " letters"; break;
    case SystemKind::Permutation: os << "permutation of " << size_ << " points"; break;
  }
  return os.str();
}

bool operator==(const SymbolicSystem& a, const SymbolicSystem& b) noexcept {
  if (a.is_word_system() != b.is_word_system()) return false;
  if (a.size_ != b.size_) return false;
  if (a.is_word_system()) return a.transition_ == b.transition_;
  return a.table_ == b.table_;
}

std::vector<Word> admissible_words(const SymbolicSystem& sys, int n) {
  require(sys.is_word_system(), ErrorCode::InvalidArgument,
          "admissible_words: permutation systems have points, not words");
  require(n >= 1, ErrorCode::InvalidArgument, "admissible_words: length must be positive");
  const int k = sys.alphabet_size();
  std::vector<Word> out;
  Word w(n, 0);
  // Iterative depth-first enumeration; produces lexicographic order.
  std::vector<int> next(n, 0);
  int depth = 0;
  while (depth >= 0) {
    if (next[depth] >= k) {
      next[depth] = 0;
      --depth;
      continue;
    }
    const int letter = next[depth]++;
    if (depth > 0 && !sys.allows(w[depth - 1], letter)) continue;
    w[depth] = letter;
    if (depth + 1 == n) {
      out.push_back(w);
    } else {
      ++depth;
      next[depth] = 0;
    }
  }
  return out;
}

double count_admissible_words(const SymbolicSystem& sys, int n) {
  require(sys.is_word_system(), ErrorCode::InvalidArgument, "word counts need a word system");
  require(n >= 1, ErrorCode::InvalidArgument, "word counts need a positive length");
  const int k = sys.alphabet_size();
  std::vector<double> ends(k, 1.0), nxt(k);
  for (int len = 2; len <= n; ++len) {
    std::fill(nxt.begin(), nxt.end(), 0.0);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        if (sys.allows(a, b)) nxt[b] += ends[a];
    ends.swap(nxt);
  }
  return std::accumulate(ends.begin(), ends.end(), 0.0);
}

double word_count_growth(const SymbolicSystem& sys, int n_max) {
  require(n_max >= 2, ErrorCode::InvalidArgument, "word_count_growth needs n_max >= 2");
  return std::log(count_admissible_words(sys, n_max)) / n_max;
}

SymbolicSystem power_system(const SymbolicSystem& sys, int M) {
  require(M >= 1, ErrorCode::InvalidArgument, "power_system: M must be positive");
  if (M == 1) return sys;
  if (sys.kind() == SystemKind::Permutation) {
    const auto& t = sys.table();
    std::vector<int> out(t.size());
    for (std::size_t p = 0; p < t.size(); ++p) {
      int q = static_cast<int>(p);
      for (int m = 0; m < M; ++m) q = t[q];
      out[p] = q;
    }
    return SymbolicSystem::permutation(std::move(out));
  }
  if (sys.kind() == SystemKind::FullShift) {
    int letters = 1;
    for (int m = 0; m < M; ++m) letters *= sys.alphabet_size();
    return SymbolicSystem::full_shift(letters);
  }
  const auto blocks = admissible_words(sys, M);
  const int n = static_cast<int>(blocks.size());
  std::vector<std::vector<int>> t(n, std::vector<int>(n, 0));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) t[u][v] = sys.allows(blocks[u].back(), blocks[v].front()) ? 1 : 0;
  return SymbolicSystem::sft(std::move(t));
}

}  // namespace covent
