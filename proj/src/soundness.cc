#include "cnofs/soundness.h"

#include <algorithm>
#include <bit>
#include <limits>

namespace cnofs {

namespace {

IndexSet MaskToSet(uint32_t mask) {
  IndexSet out;
  for (uint32_t i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1) out.push_back(i);
  }
  return out;
}

unsigned SmallCount(const SoundnessSystem& sys, unsigned limit) {
  ChallengeIndex count = sys.challenge_count();
  if (count > limit) {
    throw ChallengeSpaceTooLarge(
        "exhaustive subset scan needs at most " + std::to_string(limit) +
        " challenges, got " + ToString(count));
  }
  return static_cast<unsigned>(count);
}

}  // namespace

void SoundnessSystem::ForEachMinimalSet(const Visitor& visit) const {
  unsigned count = SmallCount(*this, 20);
  std::vector<IndexSet> minimal;
  for (uint32_t mask = 0; mask < (uint32_t{1} << count); ++mask) {
    IndexSet set = MaskToSet(mask);
    if (IsMinimal(*this, set)) minimal.push_back(std::move(set));
  }
  std::sort(minimal.begin(), minimal.end());
  for (const auto& set : minimal) {
    if (!visit(set)) return;
  }
}

bool IsMinimal(const SoundnessSystem& sys, std::span<const ChallengeIndex> set) {
  if (!sys.Contains(set)) return false;
  IndexSet smaller(set.size() > 0 ? set.size() - 1 : 0);
  for (size_t drop = 0; drop < set.size(); ++drop) {
    std::copy(set.begin(), set.begin() + drop, smaller.begin());
    std::copy(set.begin() + drop + 1, set.end(), smaller.begin() + drop);
    if (sys.Contains(smaller)) return false;
  }
  return true;
}

ThresholdSystem::ThresholdSystem(ChallengeIndex challenge_count, uint32_t k)
    : count_(challenge_count), k_(k) {
  if (k > challenge_count) {
    throw InvalidChallenge("threshold exceeds the number of challenges");
  }
}

void ThresholdSystem::ForEachMinimalSet(const Visitor& visit) const {
  if (count_ > std::numeric_limits<uint32_t>::max()) {
    throw ChallengeSpaceTooLarge("threshold system too large to enumerate");
  }
  uint32_t n = static_cast<uint32_t>(count_);
  IndexSet set(k_);
  for (uint32_t i = 0; i < k_; ++i) set[i] = i;
  while (true) {
    if (!visit(set)) return;
    // Advance to the next k-combination in lexicographic order.
    int i = static_cast<int>(k_) - 1;
    while (i >= 0 && set[i] == n - k_ + i) --i;
    if (i < 0) return;
    ++set[i];
    for (uint32_t j = i + 1; j < k_; ++j) set[j] = set[j - 1] + 1;
  }
}

std::optional<Rational> ThresholdSystem::ClosedFormPTriv() const {
  if (k_ == 0) return Rational(0);
  return Rational(static_cast<uint64_t>(k_ - 1)) / Rational(ToBigInt(count_));
}

ProductSystem::ProductSystem(std::shared_ptr<const SoundnessSystem> base,
                             uint32_t repetitions)
    : base_(std::move(base)), repetitions_(repetitions), count_(1) {
  if (repetitions == 0) throw InvalidChallenge("repetition count must be >= 1");
  ChallengeIndex b = base_->challenge_count();
  for (uint32_t j = 0; j < repetitions; ++j) {
    if (count_ > std::numeric_limits<ChallengeIndex>::max() / b) {
      throw ChallengeSpaceTooLarge("product system exceeds 512 bits");
    }
    count_ *= b;
  }
}

bool ProductSystem::Contains(std::span<const ChallengeIndex> set) const {
  ChallengeIndex b = base_->challenge_count();
  ChallengeIndex radix = 1;
  IndexSet projection;
  for (uint32_t j = 0; j < repetitions_; ++j, radix *= b) {
    projection.clear();
    for (ChallengeIndex index : set) projection.push_back(index / radix % b);
    std::sort(projection.begin(), projection.end());
    projection.erase(std::unique(projection.begin(), projection.end()),
                     projection.end());
    if (base_->Contains(projection)) return true;
  }
  return false;
}

std::optional<Rational> ProductSystem::ClosedFormPTriv() const {
  auto base = base_->ClosedFormPTriv();
  if (!base) return std::nullopt;
  using boost::multiprecision::pow;
  return Rational(pow(numerator(*base), repetitions_),
                  pow(denominator(*base), repetitions_));
}

Rational PTriv(const SoundnessSystem& sys) {
  if (auto closed = sys.ClosedFormPTriv()) return *closed;
  return PTrivExhaustive(sys);
}

Rational PTrivExhaustive(const SoundnessSystem& sys) {
  unsigned count = SmallCount(sys, SoundnessSystem::kMaxExhaustiveChallenges);
  if (count == 0) throw InvalidChallenge("empty challenge space");
  int best = 0;
  IndexSet set;
  for (uint32_t mask = 0; mask < (uint32_t{1} << count); ++mask) {
    int size = std::popcount(mask);
    if (size <= best) continue;
    set = MaskToSet(mask);
    if (!sys.Contains(set)) best = size;
  }
  return Rational(best) / Rational(count);
}

}  // namespace cnofs
