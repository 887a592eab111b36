#include "covent/carrier.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

#include "covent/error.hpp"

namespace covent {

namespace {

struct Registry {
  std::mutex mu;
  std::map<std::pair<const SymbolicSystem*, int>, std::weak_ptr<const Carrier>> entries;
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

Carrier::Carrier(SystemPtr sys, int window, std::vector<int> symbols, std::size_t size)
    : system_(std::move(sys)), window_(window), symbols_(std::move(symbols)), size_(size) {}

CarrierPtr Carrier::words(const SystemPtr& sys, int window) {
  require(sys != nullptr, ErrorCode::InvalidArgument, "null system");
  require(sys->is_word_system(), ErrorCode::InvalidArgument, "word carrier needs a word system");
  require(window >= 1, ErrorCode::InvalidArgument, "word carrier window must be positive");
  auto& reg = registry();
  const std::lock_guard lock(reg.mu);
  auto& slot = reg.entries[{sys.get(), window}];
  if (auto live = slot.lock()) return live;
  const auto ws = admissible_words(*sys, window);
  std::vector<int> flat;
  flat.reserve(ws.size() * static_cast<std::size_t>(window));
  for (const auto& w : ws) flat.insert(flat.end(), w.begin(), w.end());
  auto c = std::make_shared<const Carrier>(sys, window, std::move(flat), ws.size());
  slot = c;
  return c;
}

CarrierPtr Carrier::points(const SystemPtr& sys) {
  require(sys != nullptr, ErrorCode::InvalidArgument, "null system");
  require(sys->kind() == SystemKind::Permutation, ErrorCode::InvalidArgument,
          "point carrier needs a permutation system");
  auto& reg = registry();
  const std::lock_guard lock(reg.mu);
  auto& slot = reg.entries[{sys.get(), 0}];
  if (auto live = slot.lock()) return live;
  auto c = std::make_shared<const Carrier>(sys, 0, std::vector<int>{},
                                           static_cast<std::size_t>(sys->point_count()));
  slot = c;
  return c;
}

CarrierPtr Carrier::base(const SystemPtr& sys) {
  return sys->is_word_system() ? words(sys, 1) : points(sys);
}

std::optional<std::size_t> Carrier::find(std::span<const int> w) const {
  if (is_points()) {
    if (w.size() != 1 || w[0] < 0 || static_cast<std::size_t>(w[0]) >= size_) return std::nullopt;
    return static_cast<std::size_t>(w[0]);
  }
  if (static_cast<int>(w.size()) != window_) return std::nullopt;
  std::size_t lo = 0, hi = size_;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto m = word(mid);
    if (std::lexicographical_compare(m.begin(), m.end(), w.begin(), w.end()))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < size_ && std::equal(w.begin(), w.end(), word(lo).begin())) return lo;
  return std::nullopt;
}

std::size_t Carrier::index_of(std::span<const int> w) const {
  if (auto i = find(w)) return *i;
  std::string s;
  for (int x : w) s += std::to_string(x) + (window_ ? "" : " ");
  fail(ErrorCode::InadmissibleWord, "'" + s + "' is not an admissible element of the carrier");
}

std::string Carrier::label(std::size_t i) const {
  if (is_points()) return std::to_string(i);
  std::string s;
  const bool wide = system_->alphabet_size() > 10;
  for (int x : word(i)) {
    if (wide && !s.empty()) s += '.';
    s += std::to_string(x);
  }
  return s;
}

bool Carrier::same_as(const Carrier& o) const noexcept {
  if (this == &o) return true;
  return window_ == o.window_ && *system_ == *o.system_;
}

void require_same_carrier(const Carrier& a, const Carrier& b, const char* where) {
  require(a.same_as(b), ErrorCode::CarrierMismatch,
          std::string(where) + ": families live on different carriers (window " +
              std::to_string(a.window()) + " vs " + std::to_string(b.window()) + ")");
}

}  // namespace covent
