#include "covent/families.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "covent/error.hpp"

namespace covent {

namespace {

void require_words(const SetFamily& U, const char* where) {
  require(!U.carrier()->is_points(), ErrorCode::InvalidArgument,
          std::string(where) + " needs a word carrier");
}

/// membership[i] = indices of the elements containing carrier index i.
std::vector<std::vector<std::size_t>> memberships(const SetFamily& U) {
  std::vector<std::vector<std::size_t>> out(U.carrier()->size());
  for (std::size_t m = 0; m < U.size(); ++m) U[m].for_each([&](std::size_t i) { out[i].push_back(m); });
  return out;
}

/// Family on the word carrier of window W whose element m is
/// { w : w[offset .. offset+L) in U_m }.
SetFamily lift(const SetFamily& U, int W, int offset) {
  const auto& from = *U.carrier();
  const int L = from.window();
  auto to = Carrier::words(from.system(), W);
  const auto member = memberships(U);
  std::vector<BitSet> elems(U.size(), BitSet(to->size()));
  for (std::size_t i = 0; i < to->size(); ++i) {
    const auto sub = to->word(i).subspan(static_cast<std::size_t>(offset), static_cast<std::size_t>(L));
    const auto j = from.find(sub);
    if (!j) fail(ErrorCode::Internal, "sub-word of an admissible word is inadmissible");
    for (auto m : member[*j]) elems[m].set(i);
  }
  return SetFamily(std::move(to), std::move(elems), U.kind());
}

}  // namespace

SetFamily::SetFamily(CarrierPtr carrier, std::vector<BitSet> elements, FamilyKind kind)
    : carrier_(std::move(carrier)), elements_(std::move(elements)), kind_(kind) {
  require(carrier_ != nullptr, ErrorCode::InvalidArgument, "family without carrier");
  require(!elements_.empty(), ErrorCode::NotACover, "a family needs at least one element");
  BitSet uni(carrier_->size());
  for (const auto& e : elements_) {
    require(e.size() == carrier_->size(), ErrorCode::CarrierMismatch, "element sized for another carrier");
    if (kind_ == FamilyKind::Partition)
      require(!uni.intersects(e), ErrorCode::NotAPartition, "partition elements overlap");
    uni |= e;
  }
  require(uni.all(), ErrorCode::NotACover, "family does not cover the carrier");
}

SetFamily SetFamily::from_words(CarrierPtr carrier, const std::vector<std::vector<Word>>& elements,
                                FamilyKind kind) {
  std::vector<BitSet> elems;
  for (const auto& el : elements) {
    BitSet b(carrier->size());
    for (const auto& w : el) b.set(carrier->index_of(w));
    elems.push_back(std::move(b));
  }
  return SetFamily(std::move(carrier), std::move(elems), kind);
}

SetFamily SetFamily::from_points(CarrierPtr carrier, const std::vector<std::vector<int>>& elements,
                                 FamilyKind kind) {
  std::vector<BitSet> elems;
  for (const auto& el : elements) {
    BitSet b(carrier->size());
    for (int p : el) b.set(carrier->index_of(std::span<const int>(&p, 1)));
    elems.push_back(std::move(b));
  }
  return SetFamily(std::move(carrier), std::move(elems), kind);
}

SetFamily SetFamily::trivial(CarrierPtr carrier) {
  BitSet all = BitSet::full(carrier->size());
  return SetFamily(std::move(carrier), {std::move(all)}, FamilyKind::Partition);
}

SetFamily SetFamily::cylinders(CarrierPtr carrier) {
  std::vector<BitSet> elems;
  elems.reserve(carrier->size());
  for (std::size_t i = 0; i < carrier->size(); ++i) {
    BitSet b(carrier->size());
    b.set(i);
    elems.push_back(std::move(b));
  }
  return SetFamily(std::move(carrier), std::move(elems), FamilyKind::Partition);
}

bool SetFamily::disjoint() const noexcept {
  BitSet uni(carrier_->size());
  for (const auto& e : elements_) {
    if (uni.intersects(e)) return false;
    uni |= e;
  }
  return true;
}

bool finer(const SetFamily& U, const SetFamily& V) {
  require_same_carrier(*U.carrier(), *V.carrier(), "finer");
  return std::all_of(U.elements().begin(), U.elements().end(), [&](const BitSet& u) {
    return std::any_of(V.elements().begin(), V.elements().end(),
                       [&](const BitSet& v) { return u.is_subset_of(v); });
  });
}

SetFamily canonicalize(const SetFamily& F) {
  std::unordered_set<BitSet, BitSetHash> seen;
  std::vector<BitSet> out;
  for (const auto& e : F.elements()) {
    if (e.none()) continue;
    if (seen.insert(e).second) out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const BitSet& a, const BitSet& b) {
    const auto ca = a.count(), cb = b.count();
    if (ca != cb) return ca < cb;
    return BitSet::lex_less(a, b);
  });
  return SetFamily(F.carrier(), std::move(out), F.kind());
}

SetFamily join(const SetFamily& U, const SetFamily& V) {
  require_same_carrier(*U.carrier(), *V.carrier(), "join");
  std::vector<BitSet> cells;
  cells.reserve(U.size() * V.size());
  for (const auto& u : U.elements()) {
    for (const auto& v : V.elements()) {
      BitSet c = u & v;
      if (c.any()) cells.push_back(std::move(c));
    }
  }
  const auto kind =
      U.is_partition() && V.is_partition() ? FamilyKind::Partition : FamilyKind::Cover;
  return canonicalize(SetFamily(U.carrier(), std::move(cells), kind));
}

SetFamily extend_window(const SetFamily& U, int new_window) {
  require_words(U, "extend_window");
  require(new_window >= U.window(), ErrorCode::InvalidArgument,
          "extend_window cannot shrink the window");
  if (new_window == U.window()) return U;
  return lift(U, new_window, 0);
}

SetFamily shift_preimage(const SetFamily& U, int s) {
  require(s >= 0, ErrorCode::InvalidArgument, "shift_preimage needs s >= 0");
  if (s == 0) return U;
  if (!U.carrier()->is_points()) return lift(U, U.window() + s, s);
  const auto& sys = *U.carrier()->system();
  const std::size_t n = U.carrier()->size();
  std::vector<int> image(n);
  for (std::size_t p = 0; p < n; ++p) {
    int q = static_cast<int>(p);
    for (int k = 0; k < s; ++k) q = sys.image(q);
    image[p] = q;
  }
  std::vector<BitSet> elems(U.size(), BitSet(n));
  for (std::size_t m = 0; m < U.size(); ++m)
    for (std::size_t p = 0; p < n; ++p)
      if (U[m].test(static_cast<std::size_t>(image[p]))) elems[m].set(p);
  return SetFamily(U.carrier(), std::move(elems), U.kind());
}

SetFamily dynamical_join(const SetFamily& U, int M, int N) {
  require(M >= 0 && M <= N, ErrorCode::InvalidArgument, "dynamical_join needs 0 <= M <= N");
  if (M == N) return U.carrier()->is_points() ? shift_preimage(U, M) : U;
  if (U.carrier()->is_points()) {
    SetFamily acc = canonicalize(shift_preimage(U, M));
    for (int n = M + 1; n <= N; ++n) acc = join(acc, shift_preimage(U, n));
    return acc;
  }
  const int L = U.window();
  const int W = N - M + L;
  SetFamily acc = canonicalize(lift(U, W, 0));
  for (int n = 1; n <= N - M; ++n) acc = join(acc, lift(U, W, n));
  return acc;
}

// --- Ext(U) ---------------------------------------------------------------

ExtPartitions::ExtPartitions(const SetFamily& U, std::optional<BitSet> within)
    : U_(U), within_(std::move(within)) {
  if (within_) require(within_->size() == U.carrier()->size(), ErrorCode::CarrierMismatch,
                       "restriction set sized for another carrier");
  restart();
}

void ExtPartitions::restart() {
  perm_.resize(U_.size());
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  done_ = false;
}

std::optional<OrderedDifference> ExtPartitions::next() {
  if (done_) return std::nullopt;
  const std::size_t n = U_.carrier()->size();
  BitSet taken(n);
  std::vector<BitSet> cells;
  cells.reserve(perm_.size() + 1);
  for (auto m : perm_) {
    BitSet c = U_[m] - taken;
    if (within_) c &= *within_;
    taken |= U_[m];
    cells.push_back(std::move(c));
  }
  if (within_) {
    BitSet rest = within_->complement();
    if (rest.any()) cells.push_back(std::move(rest));
  }
  OrderedDifference out{perm_, SetFamily(U_.carrier(), std::move(cells), FamilyKind::Partition)};
  done_ = !std::next_permutation(perm_.begin(), perm_.end());
  return out;
}

// --- U* -------------------------------------------------------------------

UStarStream::UStarStream(const SetFamily& U) : U_(U) {
  const auto member = memberships(U_);
  fixed_.assign(member.size(), -1);
  for (std::size_t i = 0; i < member.size(); ++i) {
    if (member[i].size() == 1) {
      fixed_[i] = static_cast<int>(member[i][0]);
    } else {
      free_points_.push_back(i);
      choices_.push_back(member[i]);
    }
  }
  restart();
}

void UStarStream::restart() {
  digits_.assign(free_points_.size(), 0);
  done_ = false;
}

std::optional<SetFamily> UStarStream::next() {
  if (done_) return std::nullopt;
  const std::size_t n = U_.carrier()->size();
  std::vector<BitSet> cells(U_.size(), BitSet(n));
  for (std::size_t i = 0; i < n; ++i)
    if (fixed_[i] >= 0) cells[static_cast<std::size_t>(fixed_[i])].set(i);
  for (std::size_t k = 0; k < free_points_.size(); ++k) cells[choices_[k][digits_[k]]].set(free_points_[k]);
  SetFamily out(U_.carrier(), std::move(cells), FamilyKind::Partition);
  // Mixed-radix increment, last free point fastest.
  std::size_t k = digits_.size();
  while (k > 0) {
    --k;
    if (++digits_[k] < choices_[k].size()) break;
    digits_[k] = 0;
    if (k == 0) {
      done_ = true;
      break;
    }
  }
  if (digits_.empty()) done_ = true;
  return out;
}

UStarEnumeration ustar_enumerate(const SetFamily& U, std::uint64_t budget) {
  const auto member = memberships(U);
  std::uint64_t count = 1;
  constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
  for (const auto& m : member) {
    const std::uint64_t c = m.size();
    if (c > 1) count = count > cap / c ? cap : count * c;
  }
  UStarEnumeration out;
  out.assignment_count = count;
  if (count <= budget) out.stream.emplace(U);
  return out;
}

double family_delta(std::span<const double> masses, const SetFamily& U, const SetFamily& V) {
  require_same_carrier(*U.carrier(), *V.carrier(), "family_delta");
  require(U.size() == V.size(), ErrorCode::InvalidArgument, "family_delta needs equal element counts");
  require(masses.size() == U.carrier()->size(), ErrorCode::CarrierMismatch, "mass vector sized for another carrier");
  double d = 0.0;
  for (std::size_t m = 0; m < U.size(); ++m) d += (U[m] ^ V[m]).weight(masses);
  return d;
}

SetFamily pullback(const FactorMap& phi, const SetFamily& U) {
  require_words(U, "pullback");
  require(*U.carrier()->system() == *phi.codomain(), ErrorCode::CarrierMismatch,
          "pullback: family does not live on the factor's codomain");
  const int L = U.window();
  auto dom = Carrier::words(phi.domain(), L + phi.block() - 1);
  const auto member = memberships(U);
  std::vector<BitSet> elems(U.size(), BitSet(dom->size()));
  for (std::size_t i = 0; i < dom->size(); ++i) {
    const Word img = phi.image(dom->word(i));
    const auto j = U.carrier()->find(img);
    if (!j) fail(ErrorCode::InadmissibleWord, "factor image is not in the codomain carrier");
    for (auto m : member[*j]) elems[m].set(i);
  }
  return SetFamily(std::move(dom), std::move(elems), U.kind());
}

}  // namespace covent
