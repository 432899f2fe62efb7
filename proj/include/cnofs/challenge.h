#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cnofs/bytes.h"

namespace cnofs {

// Index of a challenge inside its challenge space, in [0, |C|). Spaces are
// limited to 512 bits, which covers every size the bias budget admits for
// n <= 576.
using ChallengeIndex = boost::multiprecision::uint512_t;
inline constexpr unsigned kMaxChallengeBits = 512;

// A challenge c: sorted, distinct indices of the messages to open.
using Challenge = std::vector<uint32_t>;

std::string ToString(ChallengeIndex v);

// Number of bits needed to write v - 1, i.e. ceil(log2 v) for v >= 1.
unsigned CeilLog2(const ChallengeIndex& v);

// Uniform in [0, bound) up to 2^-64 statistical distance: reduces
// bit_length(bound) + 64 random bits.
template <class Generator>
ChallengeIndex UniformIndex(Generator& gen, const ChallengeIndex& bound) {
  unsigned words = (CeilLog2(bound) + 64 + 63) / 64;
  boost::multiprecision::cpp_int acc = 0;
  for (unsigned i = 0; i < words; ++i) {
    acc <<= 64;
    acc |= static_cast<uint64_t>(gen());
  }
  return static_cast<ChallengeIndex>(acc % boost::multiprecision::cpp_int(bound));
}

// Descriptor of C as a subset of 2^[l], with a bijective unrank.
class ChallengeSpace {
 public:
  virtual ~ChallengeSpace() = default;

  virtual ChallengeIndex size() const = 0;
  virtual Challenge Unrank(ChallengeIndex index) const = 0;
  // max |c| over the space.
  virtual size_t max_challenge_size() const = 0;
};

// {{0}, {1}, ..., {count-1}}.
class SingletonSpace : public ChallengeSpace {
 public:
  explicit SingletonSpace(uint32_t count) : count_(count) {}

  ChallengeIndex size() const override { return count_; }
  Challenge Unrank(ChallengeIndex index) const override;
  size_t max_challenge_size() const override { return 1; }

 private:
  uint32_t count_;
};

// An explicitly listed family of challenges, unranked by position.
class ExplicitSpace : public ChallengeSpace {
 public:
  explicit ExplicitSpace(std::vector<Challenge> members);

  ChallengeIndex size() const override { return members_.size(); }
  Challenge Unrank(ChallengeIndex index) const override;
  size_t max_challenge_size() const override { return max_size_; }

 private:
  std::vector<Challenge> members_;
  size_t max_size_ = 0;
};

// All k-subsets of [n], unranked in lexicographic order.
class KSubsetSpace : public ChallengeSpace {
 public:
  KSubsetSpace(uint32_t n, uint32_t k);

  ChallengeIndex size() const override { return size_; }
  Challenge Unrank(ChallengeIndex index) const override;
  size_t max_challenge_size() const override { return k_; }

 private:
  uint32_t n_;
  uint32_t k_;
  ChallengeIndex size_;
};

// C^r for an r-fold parallel repetition. Repetition j owns message indices
// [j*base_messages, (j+1)*base_messages); its challenge is mixed-radix digit j
// of the index (repetition 0 least significant).
class ProductSpace : public ChallengeSpace {
 public:
  ProductSpace(std::shared_ptr<const ChallengeSpace> base,
               uint32_t base_messages, uint32_t repetitions);

  ChallengeIndex size() const override { return size_; }
  Challenge Unrank(ChallengeIndex index) const override;
  size_t max_challenge_size() const override;

  // Per-repetition digits of `index`.
  std::vector<ChallengeIndex> Digits(ChallengeIndex index) const;
  ChallengeIndex Compose(const std::vector<ChallengeIndex>& digits) const;

  const ChallengeSpace& base() const { return *base_; }
  uint32_t repetitions() const { return repetitions_; }
  uint32_t base_messages() const { return base_messages_; }

 private:
  std::shared_ptr<const ChallengeSpace> base_;
  uint32_t base_messages_;
  uint32_t repetitions_;
  ChallengeIndex size_;
};

// Binomial coefficient; throws ChallengeSpaceTooLarge past kMaxChallengeBits.
ChallengeIndex Binomial(uint32_t n, uint32_t k);

}  // namespace cnofs
