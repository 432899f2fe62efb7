#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cnofs/challenge.h"

namespace cnofs {

using Rational = boost::multiprecision::cpp_rational;

inline boost::multiprecision::cpp_int ToBigInt(const ChallengeIndex& v) {
  return boost::multiprecision::cpp_int(v);
}

// Sorted, distinct challenge indices.
using IndexSet = std::vector<ChallengeIndex>;

// A monotone increasing family S of challenge sets, given by a membership
// predicate and an enumerator of its minimal members.
class SoundnessSystem {
 public:
  // Limit for exhaustive scans over all subsets of C.
  static constexpr unsigned kMaxExhaustiveChallenges = 24;

  using Visitor = std::function<bool(const IndexSet&)>;

  virtual ~SoundnessSystem() = default;

  virtual ChallengeIndex challenge_count() const = 0;
  virtual bool Contains(std::span<const ChallengeIndex> set) const = 0;

  // Visits every member of S_min in lexicographic order until `visit`
  // returns false. The default scans all subsets and needs |C| <= 20.
  virtual void ForEachMinimalSet(const Visitor& visit) const;

  virtual std::optional<Rational> ClosedFormPTriv() const { return std::nullopt; }
};

// S in S and no proper subset obtained by dropping one element is.
bool IsMinimal(const SoundnessSystem& sys, std::span<const ChallengeIndex> set);

// T_k = {S : |S| >= k}.
class ThresholdSystem : public SoundnessSystem {
 public:
  ThresholdSystem(ChallengeIndex challenge_count, uint32_t k);

  ChallengeIndex challenge_count() const override { return count_; }
  bool Contains(std::span<const ChallengeIndex> set) const override {
    return set.size() >= k_;
  }
  void ForEachMinimalSet(const Visitor& visit) const override;
  std::optional<Rational> ClosedFormPTriv() const override;

  uint32_t k() const { return k_; }

 private:
  ChallengeIndex count_;
  uint32_t k_;
};

// Arbitrary monotone family from a predicate.
class PredicateSystem : public SoundnessSystem {
 public:
  using Predicate = std::function<bool(std::span<const ChallengeIndex>)>;

  PredicateSystem(ChallengeIndex challenge_count, Predicate contains)
      : count_(challenge_count), contains_(std::move(contains)) {}

  ChallengeIndex challenge_count() const override { return count_; }
  bool Contains(std::span<const ChallengeIndex> set) const override {
    return contains_(set);
  }

 private:
  ChallengeIndex count_;
  Predicate contains_;
};

// The r-fold OR-system over C^r: a set qualifies iff its projection onto
// some repetition qualifies in the base system. Indices use the mixed-radix
// layout of ProductSpace.
class ProductSystem : public SoundnessSystem {
 public:
  ProductSystem(std::shared_ptr<const SoundnessSystem> base,
                uint32_t repetitions);

  ChallengeIndex challenge_count() const override { return count_; }
  bool Contains(std::span<const ChallengeIndex> set) const override;
  std::optional<Rational> ClosedFormPTriv() const override;

  const SoundnessSystem& base() const { return *base_; }
  uint32_t repetitions() const { return repetitions_; }

 private:
  std::shared_ptr<const SoundnessSystem> base_;
  uint32_t repetitions_;
  ChallengeIndex count_;
};

// (1/|C|) * max{|S| : S not in S}. Uses the closed form when available,
// otherwise an exhaustive scan (ChallengeSpaceTooLarge beyond 24 challenges).
Rational PTriv(const SoundnessSystem& sys);
Rational PTrivExhaustive(const SoundnessSystem& sys);

}  // namespace cnofs
