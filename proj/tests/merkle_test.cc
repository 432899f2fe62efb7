#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <numeric>

#include "cnofs/merkle.h"
#include "oracles.h"

namespace cnofs {
namespace {

std::set<std::string> AsStrings(const std::vector<TreeVertex>& vs) {
  std::set<std::string> out;
  for (const TreeVertex& v : vs) {
    std::string s;
    for (uint32_t k = v.depth; k-- > 0;) s.push_back((v.bits >> k) & 1 ? '1' : '0');
    out.insert(s);
  }
  return out;
}

std::vector<Bytes> Messages(size_t count, const std::string& prefix = "m") {
  std::vector<Bytes> out;
  for (size_t i = 0; i < count; ++i) out.push_back(ToBytes(prefix + std::to_string(i)));
  return out;
}

std::vector<Bytes> Select(const std::vector<Bytes>& messages, const Challenge& c) {
  std::vector<Bytes> out;
  for (uint32_t i : c) out.push_back(messages[i]);
  return out;
}

// Every subset of [l] with 1 <= |c| <= max_size, in lexicographic order.
std::vector<Challenge> SmallSubsets(uint32_t l, uint32_t max_size) {
  std::vector<Challenge> out;
  Challenge c;
  std::function<void(uint32_t)> rec = [&](uint32_t start) {
    if (!c.empty()) out.push_back(c);
    if (c.size() == max_size) return;
    for (uint32_t i = start; i < l; ++i) {
      c.push_back(i);
      rec(i + 1);
      c.pop_back();
    }
  };
  rec(0);
  return out;
}

TEST(OctoSet, FigureExampleAtEightLeaves) {
  // Leaf 1 = 001: siblings 000, 01 and 1.
  auto octo = OctoSet({1}, 3);
  EXPECT_EQ(octo.size(), 3u);
  EXPECT_EQ(AsStrings(octo), (std::set<std::string>{"000", "01", "1"}));
  EXPECT_EQ(octo[0], (TreeVertex{3, 0b000}));
  EXPECT_EQ(octo[1], (TreeVertex{2, 0b01}));
  EXPECT_EQ(octo[2], (TreeVertex{1, 0b1}));
}

TEST(OctoSet, AllLeavesOpenedNeedsNothing) {
  for (uint32_t h = 0; h <= 5; ++h) {
    Challenge all(1u << h);
    std::iota(all.begin(), all.end(), 0);
    EXPECT_TRUE(OctoSet(all, h).empty());
  }
}

TEST(OctoSet, SharedPathsAtEightLeaves) {
  EXPECT_EQ(OctoSet({0, 1}, 3).size(), 2u);
  EXPECT_EQ(OctoSet({1, 2}, 3).size(), 3u);
  EXPECT_EQ(AsStrings(OctoSet({1, 2}, 3)), testing::BruteForceOcto({1, 2}, 3));
}

TEST(OctoSet, DisjointPathsAtSixteenLeaves) {
  EXPECT_EQ(OctoSet({3, 11}, 4).size(), 6u);
}

TEST(OctoSet, MatchesAuthUnionReference) {
  size_t checked = 0;
  for (uint32_t h = 1; h <= 5; ++h) {
    for (const Challenge& c : SmallSubsets(1u << h, 4)) {
      auto octo = OctoSet(c, h);
      ASSERT_EQ(AsStrings(octo), testing::BruteForceOcto(c, h));
      EXPECT_TRUE(std::is_sorted(octo.begin(), octo.end(), OctopusOrder()));
      EXPECT_LE(octo.size(), c.size() * h);
      ++checked;
    }
  }
  EXPECT_GT(checked, 40000u);
}

TEST(OctoSet, SingleLeafHasHeightMany) {
  for (uint32_t h = 0; h <= 10; ++h) {
    for (uint32_t i = 0; i < (1u << h); i += 1 + (1u << h) / 16) {
      EXPECT_EQ(OctoSet({i}, h).size(), h);
    }
  }
}

TEST(OctoSet, RejectsMalformedChallenges) {
  EXPECT_THROW(OctoSet({}, 3), InvalidChallenge);
  EXPECT_THROW(OctoSet({8}, 3), InvalidChallenge);
  EXPECT_THROW(OctoSet({2, 1}, 3), InvalidChallenge);
  EXPECT_THROW(OctoSet({1, 1}, 3), InvalidChallenge);
}

TEST(TreeHeight, RoundsUp) {
  EXPECT_EQ(TreeHeight(1), 0u);
  EXPECT_EQ(TreeHeight(2), 1u);
  EXPECT_EQ(TreeHeight(51), 6u);
  EXPECT_EQ(TreeHeight(64), 6u);
  EXPECT_EQ(TreeHeight(65), 7u);
}

TEST(MerkleTree, TwoLeavesUnrolled) {
  ConcreteOracle oracle(128);
  auto m = Messages(2);
  MerkleTree tree = MerkleTree::Build(oracle, m);
  Digest l0 = ConcreteHash(OracleInput::Msg(m[0]).Encode(), 128);
  Digest l1 = ConcreteHash(OracleInput::Msg(m[1]).Encode(), 128);
  EXPECT_EQ(tree.root(), ConcreteHash(OracleInput::Node(l0, l1).Encode(), 128));
}

TEST(MerkleTree, EqualMessagesGiveEqualSubtrees) {
  ConcreteOracle oracle(64);
  std::vector<Bytes> m(4, ToBytes("same"));
  MerkleTree tree = MerkleTree::Build(oracle, m);
  EXPECT_EQ(tree.label({1, 0}), tree.label({1, 1}));
}

TEST(MerkleTree, RecordsTwoLMinusOneEntries) {
  for (size_t l : {1u, 2u, 8u, 32u}) {
    RecordingOracle oracle(64, l);
    MerkleTree::Build(oracle, Messages(l));
    EXPECT_EQ(oracle.database().size(), 2 * l - 1);
  }
}

TEST(MerkleTree, RejectsNonPowerOfTwo) {
  ConcreteOracle oracle(64);
  EXPECT_THROW(MerkleTree::Build(oracle, Messages(3)), InvalidChallenge);
  EXPECT_THROW(MerkleTree::Build(oracle, Messages(0)), InvalidChallenge);
}

TEST(MerkleTree, OpenReturnsCachedLabels) {
  ConcreteOracle oracle(64);
  MerkleTree tree = MerkleTree::Build(oracle, Messages(8));
  Octopus o = tree.Open({1});
  ASSERT_EQ(o.size(), 3u);
  for (const auto& e : o) EXPECT_EQ(e.label, tree.label(e.vertex));
  Challenge all = {0, 1, 2, 3, 4, 5, 6, 7};
  EXPECT_TRUE(tree.Open(all).empty());
  EXPECT_EQ(MerkleTree::Build(oracle, Messages(16)).Open({3, 11}).size(), 6u);
}

TEST(OctoVerify, RoundTripForEveryChallenge) {
  ConcreteOracle oracle(64);
  for (uint32_t h = 0; h <= 4; ++h) {
    auto m = Messages(size_t{1} << h, "leaf" + std::to_string(h));
    MerkleTree tree = MerkleTree::Build(oracle, m);
    uint32_t l = 1u << h;
    for (uint32_t mask = 1; mask < (1ull << l); ++mask) {
      Challenge c;
      for (uint32_t i = 0; i < l; ++i) {
        if (mask >> i & 1) c.push_back(i);
      }
      ASSERT_TRUE(OctoVerify(oracle, c, h, tree.root(), Select(m, c), tree.Open(c)))
          << "h=" << h << " mask=" << mask;
    }
  }
}

TEST(OctoVerify, ShapeAndLabelTampering) {
  ConcreteOracle oracle(64);
  auto m = Messages(8);
  MerkleTree tree = MerkleTree::Build(oracle, m);
  Challenge c = {1, 6};
  Octopus o = tree.Open(c);
  auto opened = Select(m, c);
  ASSERT_TRUE(OctoVerify(oracle, c, 3, tree.root(), opened, o));

  Octopus extra = o;
  extra.push_back({{3, 1}, tree.label({3, 1})});
  EXPECT_FALSE(OctoVerify(oracle, c, 3, tree.root(), opened, extra));

  Octopus missing(o.begin() + 1, o.end());
  EXPECT_FALSE(OctoVerify(oracle, c, 3, tree.root(), opened, missing));

  Octopus reordered = o;
  std::swap(reordered[0], reordered[1]);
  EXPECT_FALSE(OctoVerify(oracle, c, 3, tree.root(), opened, reordered));

  EXPECT_FALSE(OctoVerify(oracle, c, 3, tree.root(), opened, {}));
  EXPECT_FALSE(OctoVerify(oracle, {1}, 3, tree.root(), opened, o));

  for (size_t k = 0; k < o.size(); ++k) {
    for (size_t bit = 0; bit < 64; ++bit) {
      Octopus flipped = o;
      flipped[k].label.mutable_bytes()[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
      EXPECT_FALSE(OctoVerify(oracle, c, 3, tree.root(), opened, flipped));
    }
  }
  auto bad = opened;
  bad[0].push_back(0);
  EXPECT_FALSE(OctoVerify(oracle, c, 3, tree.root(), bad, o));
}

TEST(OctoVerify, QueryCountWithinKappaTimesHeightPlusOne) {
  auto m = Messages(32);
  ConcreteOracle build(64);
  MerkleTree tree = MerkleTree::Build(build, m);
  for (const Challenge& c : SmallSubsets(32, 3)) {
    ConcreteOracle counting(64);
    ASSERT_TRUE(OctoVerify(counting, c, 5, tree.root(), Select(m, c), tree.Open(c)));
    EXPECT_LE(counting.queries(), c.size() * (5 + 1));
  }
}

TEST(MRootInverse, FreshDatabaseGivesNothing) {
  Database db;
  MessageVector m = MRootInverse(db, Digest(Bytes(8, 1)), 3);
  EXPECT_EQ(m.size(), 8u);
  for (const auto& x : m) EXPECT_FALSE(x.has_value());
}

TEST(MRootInverse, RecoversHonestCommitment) {
  RecordingOracle oracle(64, 9);
  auto m = Messages(16);
  MerkleTree tree = MerkleTree::Build(oracle, m);
  ASSERT_FALSE(oracle.database().HasCollision());
  MessageVector back = MRootInverse(oracle.database(), tree.root(), 4);
  ASSERT_EQ(back.size(), 16u);
  for (size_t i = 0; i < 16; ++i) EXPECT_EQ(back[i], m[i]);
}

TEST(MRootInverse, MissingNodeHidesItsSubtree) {
  RecordingOracle oracle(64, 10);
  auto m = Messages(8);
  MerkleTree tree = MerkleTree::Build(oracle, m);
  Database db = oracle.database();
  // Remove the NODE entry of vertex "01" (leaves 2 and 3).
  db.Erase(OracleInput::Node(tree.label({3, 2}), tree.label({3, 3})).Encode());
  MessageVector back = MRootInverse(db, tree.root(), 3);
  for (size_t i = 0; i < 8; ++i) {
    if (i == 2 || i == 3) {
      EXPECT_FALSE(back[i].has_value());
    } else {
      EXPECT_EQ(back[i], m[i]);
    }
  }
}

TEST(MRootInverse, NonNodePreimageIsNotSplit) {
  // The root's preimage is a MSG input of the right length: split refuses.
  Database db;
  Digest root(Bytes(8, 7));
  Bytes fake = OracleInput::Msg(Bytes(16, 1)).Encode();
  db.Insert(fake, root);
  MessageVector back = MRootInverse(db, root, 1);
  EXPECT_FALSE(back[0] || back[1]);
  // A height-0 tree is a single leaf: a MSG preimage is the message.
  MessageVector leaf = MRootInverse(db, root, 0);
  ASSERT_EQ(leaf.size(), 1u);
  EXPECT_EQ(leaf[0], Bytes(16, 1));
}

TEST(OctoStats, SingleLeafChallengesAllHaveSizeH) {
  Rng rng(1);
  KSubsetSpace space(8, 1);
  OctoStats s = ComputeOctoStats(space, 3, rng);
  EXPECT_TRUE(s.exhaustive);
  EXPECT_EQ(s.min, 3u);
  EXPECT_EQ(s.max, 3u);
  EXPECT_EQ(s.samples, 8u);
}

TEST(OctoStats, PairsAtEightLeavesMatchBruteForce) {
  Rng rng(1);
  KSubsetSpace space(8, 2);
  OctoStats s = ComputeOctoStats(space, 3, rng);
  std::map<size_t, uint64_t> expected;
  for (ChallengeIndex i = 0; i < space.size(); ++i) {
    ++expected[testing::BruteForceOcto(space.Unrank(i), 3).size()];
  }
  EXPECT_EQ(s.histogram, expected);
  EXPECT_EQ(s.histogram, (std::map<size_t, uint64_t>{{2, 4}, {3, 8}, {4, 16}}));
  EXPECT_DOUBLE_EQ(s.mean, (2.0 * 4 + 3.0 * 8 + 4.0 * 16) / 28);
}

TEST(OctoStats, SampledSizesRespectTheUnionBound) {
  Rng rng(2);
  KSubsetSpace space(1024, 6);
  OctoStats s = ComputeOctoStats(space, 10, rng, 2000);
  EXPECT_FALSE(s.exhaustive);
  EXPECT_EQ(s.samples, 2000u);
  EXPECT_LE(s.max, 6u * 10);
  EXPECT_GE(s.min, 10u);
}

TEST(BoundedChallengeSpace, LooseBoundKeepsEverything) {
  auto space = std::make_shared<KSubsetSpace>(16, 3);
  BoundedChallengeSpace bounded(space, 3 * 4, 4);
  for (ChallengeIndex i = 0; i < space->size(); ++i) EXPECT_TRUE(bounded.Admits(i));
}

TEST(BoundedChallengeSpace, BoundBelowHeightIsEmpty) {
  auto space = std::make_shared<KSubsetSpace>(16, 1);
  EXPECT_THROW(BoundedChallengeSpace(space, 3, 4), EmptyRestriction);
}

TEST(BoundedChallengeSpace, MembershipMatchesBruteForceFilter) {
  auto space = std::make_shared<KSubsetSpace>(16, 2);
  BoundedChallengeSpace bounded(space, 5, 4);
  size_t members = 0;
  for (ChallengeIndex i = 0; i < space->size(); ++i) {
    Challenge c = space->Unrank(i);
    bool expected = testing::BruteForceOcto(c, 4).size() <= 5;
    EXPECT_EQ(bounded.Contains(c), expected);
    members += expected;
  }
  EXPECT_GT(members, 0u);
  EXPECT_LT(members, 120u);
}

}  // namespace
}  // namespace cnofs
