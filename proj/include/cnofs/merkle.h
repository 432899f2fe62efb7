#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cnofs/challenge.h"
#include "cnofs/cno.h"
#include "cnofs/oracle.h"

namespace cnofs {

class EmptyRestriction : public Error {
 public:
  using Error::Error;
};

// A vertex of the full binary tree of height h: the first `depth` bits of a
// path from the root, stored as an integer (most significant bit first).
// The root has depth 0; leaf i has depth h and bits i.
struct TreeVertex {
  uint32_t depth = 0;
  uint64_t bits = 0;

  TreeVertex parent() const { return {depth - 1, bits >> 1}; }
  TreeVertex sibling() const { return {depth, bits ^ 1}; }
  TreeVertex child(unsigned b) const { return {depth + 1, (bits << 1) | b}; }

  friend bool operator==(const TreeVertex&, const TreeVertex&) = default;
  friend auto operator<=>(const TreeVertex&, const TreeVertex&) = default;
};

// Canonical octopus order: deeper vertices first, then by path bits.
struct OctopusOrder {
  bool operator()(const TreeVertex& a, const TreeVertex& b) const {
    if (a.depth != b.depth) return a.depth > b.depth;
    return a.bits < b.bits;
  }
};

struct OctopusEntry {
  TreeVertex vertex;
  Digest label;

  friend bool operator==(const OctopusEntry&, const OctopusEntry&) = default;
};

using Octopus = std::vector<OctopusEntry>;

// Smallest h with 2^h >= count.
uint32_t TreeHeight(uint64_t count);

// Octo(c): the off-path vertices needed to recompute the root from the leaves
// in c, in canonical order. Throws InvalidChallenge if c is empty, unsorted,
// or leaves [2^h].
std::vector<TreeVertex> OctoSet(const Challenge& c, uint32_t h);

// The labelled tree over 2^h messages.
class MerkleTree {
 public:
  // Leaves are queried in index order, then each level bottom-up, left to
  // right. Throws InvalidChallenge unless the message count is a power of two.
  static MerkleTree Build(Oracle& oracle, std::span<const Bytes> messages);

  const Digest& root() const { return levels_[0][0]; }
  uint32_t height() const { return height_; }
  size_t leaf_count() const { return size_t{1} << height_; }
  const Digest& label(const TreeVertex& v) const {
    return levels_[v.depth][v.bits];
  }

  // Cached labels at OctoSet(c), in canonical order.
  Octopus Open(const Challenge& c) const;

 private:
  uint32_t height_ = 0;
  // levels_[d][i]: label of the depth-d vertex with bits i.
  std::vector<std::vector<Digest>> levels_;
};

// Recomputes the root from the opened leaves and the octopus. Any shape
// mismatch against OctoSet(c) is a rejection. At most |c|(h+1) queries.
bool OctoVerify(Oracle& oracle, const Challenge& c, uint32_t h,
                const Digest& root, std::span<const Bytes> opened,
                const Octopus& octopus);

// MRoot_D^{-1}(y): walks down from `root` inverting labels through the
// database. A NODE preimage with a payload of exactly two digests is split;
// anything else leaves the subtree undefined. Leaves must invert to MSG.
MessageVector MRootInverse(const Database& db, const Digest& root, uint32_t h);

struct OctoStats {
  size_t min = 0;
  size_t max = 0;
  double mean = 0;
  std::map<size_t, uint64_t> histogram;
  uint64_t samples = 0;
  bool exhaustive = false;
};

inline const ChallengeIndex kExhaustiveStatsLimit = ChallengeIndex{1} << 16;

// Distribution of |Octo(c)| over the challenge space: exhaustive up to
// kExhaustiveStatsLimit challenges (or when forced), otherwise `samples`
// uniform draws.
OctoStats ComputeOctoStats(const ChallengeSpace& space, uint32_t h, Rng& rng,
                           uint64_t samples = 100000, bool force_exhaustive = false);

// {c in C : |Octo(c)| <= bound}. Members are reached by rejection: callers
// map candidate indices of the unrestricted space through Admits().
class BoundedChallengeSpace {
 public:
  BoundedChallengeSpace(std::shared_ptr<const ChallengeSpace> base,
                        size_t bound, uint32_t h);

  const ChallengeSpace& base() const { return *base_; }
  size_t bound() const { return bound_; }
  uint32_t height() const { return height_; }

  bool Contains(const Challenge& c) const;
  bool Admits(ChallengeIndex index) const { return Contains(base_->Unrank(index)); }

 private:
  std::shared_ptr<const ChallengeSpace> base_;
  size_t bound_;
  uint32_t height_;
};

}  // namespace cnofs
