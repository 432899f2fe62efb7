#include "cnofs/challenge.h"

#include <algorithm>
#include <limits>

namespace cnofs {

namespace {

constexpr ChallengeIndex kMaxIndex = std::numeric_limits<ChallengeIndex>::max();

}  // namespace

std::string ToString(ChallengeIndex v) { return v.str(); }

unsigned CeilLog2(const ChallengeIndex& v) {
  if (v <= 1) return 0;
  return static_cast<unsigned>(boost::multiprecision::msb(ChallengeIndex(v - 1))) + 1;
}

ChallengeIndex Binomial(uint32_t n, uint32_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  ChallengeIndex result = 1;
  for (uint32_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at each step.
    ChallengeIndex factor = n - k + i;
    if (result > kMaxIndex / factor) {
      throw ChallengeSpaceTooLarge("binomial coefficient exceeds 512 bits");
    }
    result = result * factor / i;
  }
  return result;
}

Challenge SingletonSpace::Unrank(ChallengeIndex index) const {
  if (index >= count_) throw InvalidChallenge("challenge index out of range");
  return {static_cast<uint32_t>(index)};
}

ExplicitSpace::ExplicitSpace(std::vector<Challenge> members)
    : members_(std::move(members)) {
  for (auto& c : members_) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    max_size_ = std::max(max_size_, c.size());
  }
}

Challenge ExplicitSpace::Unrank(ChallengeIndex index) const {
  if (index >= members_.size()) {
    throw InvalidChallenge("challenge index out of range");
  }
  return members_[static_cast<size_t>(index)];
}

KSubsetSpace::KSubsetSpace(uint32_t n, uint32_t k)
    : n_(n), k_(k), size_(Binomial(n, k)) {
  if (k == 0 || k > n) throw InvalidChallenge("need 1 <= k <= n");
}

Challenge KSubsetSpace::Unrank(ChallengeIndex index) const {
  if (index >= size_) throw InvalidChallenge("challenge index out of range");
  Challenge out;
  out.reserve(k_);
  uint32_t next = 0;
  for (uint32_t remaining = k_; remaining > 0; --remaining) {
    // Skip over blocks of subsets whose smallest remaining element is `next`.
    while (true) {
      ChallengeIndex block = Binomial(n_ - next - 1, remaining - 1);
      if (index < block) break;
      index -= block;
      ++next;
    }
    out.push_back(next++);
  }
  return out;
}

ProductSpace::ProductSpace(std::shared_ptr<const ChallengeSpace> base,
                           uint32_t base_messages, uint32_t repetitions)
    : base_(std::move(base)),
      base_messages_(base_messages),
      repetitions_(repetitions),
      size_(1) {
  if (repetitions == 0) throw InvalidChallenge("repetition count must be >= 1");
  ChallengeIndex b = base_->size();
  for (uint32_t j = 0; j < repetitions; ++j) {
    if (size_ > kMaxIndex / b) {
      throw ChallengeSpaceTooLarge("product challenge space exceeds 512 bits");
    }
    size_ *= b;
  }
}

std::vector<ChallengeIndex> ProductSpace::Digits(ChallengeIndex index) const {
  std::vector<ChallengeIndex> digits(repetitions_);
  ChallengeIndex b = base_->size();
  for (auto& d : digits) {
    d = index % b;
    index /= b;
  }
  return digits;
}

ChallengeIndex ProductSpace::Compose(
    const std::vector<ChallengeIndex>& digits) const {
  ChallengeIndex index = 0;
  for (size_t j = digits.size(); j-- > 0;) index = index * base_->size() + digits[j];
  return index;
}

Challenge ProductSpace::Unrank(ChallengeIndex index) const {
  if (index >= size_) throw InvalidChallenge("challenge index out of range");
  Challenge out;
  auto digits = Digits(index);
  for (uint32_t j = 0; j < repetitions_; ++j) {
    for (uint32_t i : base_->Unrank(digits[j])) {
      out.push_back(j * base_messages_ + i);
    }
  }
  return out;
}

size_t ProductSpace::max_challenge_size() const {
  return repetitions_ * base_->max_challenge_size();
}

}  // namespace cnofs
