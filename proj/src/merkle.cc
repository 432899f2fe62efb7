#include "cnofs/merkle.h"

#include <algorithm>
#include <bit>

namespace cnofs {

namespace {

void CheckChallenge(const Challenge& c, uint32_t h) {
  if (c.empty()) throw InvalidChallenge("empty challenge");
  if (h > 63) throw InvalidChallenge("tree too tall");
  for (size_t k = 0; k < c.size(); ++k) {
    if ((uint64_t{c[k]} >> h) != 0) {
      throw InvalidChallenge("challenge index outside the tree");
    }
    if (k > 0 && c[k] <= c[k - 1]) {
      throw InvalidChallenge("challenge indices must be sorted and distinct");
    }
  }
}

}  // namespace

uint32_t TreeHeight(uint64_t count) {
  if (count <= 1) return 0;
  return static_cast<uint32_t>(std::bit_width(count - 1));
}

std::vector<TreeVertex> OctoSet(const Challenge& c, uint32_t h) {
  CheckChallenge(c, h);
  std::vector<TreeVertex> out;
  // `level` holds the sorted path vertices at the current depth.
  std::vector<uint64_t> level(c.begin(), c.end());
  for (uint32_t depth = h; depth > 0; --depth) {
    std::vector<uint64_t> parents;
    for (size_t k = 0; k < level.size(); ++k) {
      uint64_t v = level[k];
      bool paired = (v & 1) == 0 ? k + 1 < level.size() && level[k + 1] == (v | 1)
                                 : k > 0 && level[k - 1] == (v ^ 1);
      if (!paired) out.push_back({depth, v ^ 1});
      if (parents.empty() || parents.back() != (v >> 1)) parents.push_back(v >> 1);
    }
    level = std::move(parents);
  }
  // Siblings are generated per depth in ascending order, so `out` is already
  // canonical.
  return out;
}

MerkleTree MerkleTree::Build(Oracle& oracle, std::span<const Bytes> messages) {
  if (messages.empty() || !std::has_single_bit(messages.size())) {
    throw InvalidChallenge("Merkle tree needs a power-of-two leaf count");
  }
  MerkleTree tree;
  tree.height_ = TreeHeight(messages.size());
  tree.levels_.resize(tree.height_ + 1);
  auto& leaves = tree.levels_[tree.height_];
  leaves.reserve(messages.size());
  for (const Bytes& m : messages) leaves.push_back(oracle.Query(OracleInput::Msg(m)));
  for (uint32_t depth = tree.height_; depth > 0; --depth) {
    const auto& below = tree.levels_[depth];
    auto& above = tree.levels_[depth - 1];
    above.reserve(below.size() / 2);
    for (size_t i = 0; i < below.size(); i += 2) {
      above.push_back(oracle.Query(OracleInput::Node(below[i], below[i + 1])));
    }
  }
  return tree;
}

Octopus MerkleTree::Open(const Challenge& c) const {
  Octopus out;
  for (const TreeVertex& v : OctoSet(c, height_)) out.push_back({v, label(v)});
  return out;
}

bool OctoVerify(Oracle& oracle, const Challenge& c, uint32_t h,
                const Digest& root, std::span<const Bytes> opened,
                const Octopus& octopus) {
  if (opened.size() != c.size()) return false;
  std::vector<TreeVertex> shape;
  try {
    shape = OctoSet(c, h);
  } catch (const InvalidChallenge&) {
    return false;
  }
  if (shape.size() != octopus.size()) return false;
  for (size_t k = 0; k < shape.size(); ++k) {
    if (octopus[k].vertex != shape[k]) return false;
    if (octopus[k].label.size() != oracle.digest_bytes()) return false;
  }
  for (const Bytes& m : opened) {
    if (m.size() + 1 > oracle.max_input_bytes()) return false;
  }

  // Known labels at the current depth, sorted by bits.
  std::vector<std::pair<uint64_t, Digest>> level;
  for (size_t k = 0; k < c.size(); ++k) {
    level.emplace_back(c[k], oracle.Query(OracleInput::Msg(opened[k])));
  }
  size_t next = 0;
  for (uint32_t depth = h; depth > 0; --depth) {
    // Merge in the octopus labels of this depth; both lists are sorted and
    // disjoint because the shape matched.
    std::vector<std::pair<uint64_t, Digest>> merged;
    size_t begin = next;
    while (next < octopus.size() && octopus[next].vertex.depth == depth) ++next;
    size_t a = 0, b = begin;
    while (a < level.size() || b < next) {
      if (b == next || (a < level.size() && level[a].first < octopus[b].vertex.bits)) {
        merged.push_back(std::move(level[a++]));
      } else {
        merged.emplace_back(octopus[b].vertex.bits, octopus[b].label);
        ++b;
      }
    }
    std::vector<std::pair<uint64_t, Digest>> parents;
    for (size_t k = 0; k < merged.size(); k += 2) {
      if (k + 1 >= merged.size() || merged[k + 1].first != (merged[k].first ^ 1)) {
        return false;
      }
      parents.emplace_back(merged[k].first >> 1,
                           oracle.Query(OracleInput::Node(merged[k].second,
                                                          merged[k + 1].second)));
    }
    level = std::move(parents);
  }
  return level.size() == 1 && level[0].second == root;
}

MessageVector MRootInverse(const Database& db, const Digest& root, uint32_t h) {
  const size_t n_bytes = root.size();
  std::vector<std::optional<Digest>> level{root};
  for (uint32_t depth = 0; depth < h; ++depth) {
    std::vector<std::optional<Digest>> below(level.size() * 2);
    for (size_t i = 0; i < level.size(); ++i) {
      if (!level[i]) continue;
      auto pre = db.Inverse(*level[i]);
      if (!pre || pre->empty() || (*pre)[0] != static_cast<uint8_t>(Tag::kNode) ||
          pre->size() != 1 + 2 * n_bytes) {
        continue;
      }
      auto mid = pre->begin() + 1 + static_cast<std::ptrdiff_t>(n_bytes);
      below[2 * i] = Digest(Bytes(pre->begin() + 1, mid));
      below[2 * i + 1] = Digest(Bytes(mid, pre->end()));
    }
    level = std::move(below);
  }
  MessageVector out(level.size());
  for (size_t i = 0; i < level.size(); ++i) {
    if (!level[i]) continue;
    auto pre = db.Inverse(*level[i]);
    if (pre && !pre->empty() && (*pre)[0] == static_cast<uint8_t>(Tag::kMsg)) {
      out[i] = Bytes(pre->begin() + 1, pre->end());
    }
  }
  return out;
}

OctoStats ComputeOctoStats(const ChallengeSpace& space, uint32_t h, Rng& rng,
                           uint64_t samples, bool force_exhaustive) {
  OctoStats stats;
  stats.exhaustive = force_exhaustive || space.size() <= kExhaustiveStatsLimit;
  auto record = [&](ChallengeIndex index) {
    ++stats.histogram[OctoSet(space.Unrank(index), h).size()];
  };
  if (stats.exhaustive) {
    for (ChallengeIndex index = 0; index < space.size(); ++index) record(index);
  } else {
    for (uint64_t s = 0; s < samples; ++s) {
      record(UniformIndex(rng, space.size()));
    }
  }
  double total = 0;
  for (const auto& [size, count] : stats.histogram) {
    stats.samples += count;
    total += static_cast<double>(size) * static_cast<double>(count);
  }
  if (stats.samples > 0) {
    stats.min = stats.histogram.begin()->first;
    stats.max = stats.histogram.rbegin()->first;
    stats.mean = total / static_cast<double>(stats.samples);
  }
  return stats;
}

BoundedChallengeSpace::BoundedChallengeSpace(
    std::shared_ptr<const ChallengeSpace> base, size_t bound, uint32_t h)
    : base_(std::move(base)), bound_(bound), height_(h) {
  // Look for a witness of non-emptiness: every member when the space is
  // small, a fixed pseudo-random sample otherwise.
  bool found = false;
  if (base_->size() <= kExhaustiveStatsLimit) {
    for (ChallengeIndex i = 0; i < base_->size() && !found; ++i) found = Admits(i);
  } else {
    Rng rng(0x6f63746f);
    for (int s = 0; s < (1 << 16) && !found; ++s) {
      found = Admits(UniformIndex(rng, base_->size()));
    }
  }
  if (!found) {
    throw EmptyRestriction("no challenge has an octopus of at most " +
                           std::to_string(bound) + " vertices");
  }
}

bool BoundedChallengeSpace::Contains(const Challenge& c) const {
  return OctoSet(c, height_).size() <= bound_;
}

}  // namespace cnofs
