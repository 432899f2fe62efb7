#include <gtest/gtest.h>

#include <boost/multiprecision/miller_rabin.hpp>
#include <map>

#include "cnofs/instances.h"
#include "oracles.h"

namespace cnofs {
namespace {

using boost::multiprecision::cpp_int;

std::vector<uint8_t> Colors(ByteView b) { return {b.begin(), b.end()}; }

TEST(Graph, CanonicalEdgeList) {
  Graph g(4, {{2, 1}, {0, 3}, {1, 2}, {0, 1}});
  std::vector<std::pair<uint32_t, uint32_t>> expected = {{0, 1}, {0, 3}, {1, 2}};
  EXPECT_EQ(g.edges(), expected);
  EXPECT_EQ(g.Encode(), (Bytes{4, 0, 3, 0, 1, 0, 3, 1, 2}));
  EXPECT_EQ(Graph::Decode(g.Encode()).edges(), expected);
  EXPECT_EQ(g.ToText(), "4 3\n0 1\n0 3\n1 2\n");
  EXPECT_EQ(Graph::FromText("4 3\n1 0\n3 0\n2 1\n").Encode(), g.Encode());
}

TEST(Graph, RejectsMalformedInput) {
  EXPECT_THROW(Graph(0, {}), ParseError);
  EXPECT_THROW(Graph(kMaxVertices + 1, {}), ParseError);
  EXPECT_THROW(Graph(3, {{1, 1}}), ParseError);
  EXPECT_THROW(Graph(3, {{0, 3}}), ParseError);
  EXPECT_THROW(Graph::Decode(Bytes{3, 0, 1, 1, 0}), ParseError);     // reversed edge
  EXPECT_THROW(Graph::Decode(Bytes{3, 0, 1, 0, 1, 9}), ParseError);  // trailing
  EXPECT_THROW(Graph::Decode(Bytes{3, 0, 2, 0, 1}), ParseError);     // truncated
  EXPECT_THROW(Graph::Decode(Bytes{3, 0, 2, 0, 1, 0, 1}), ParseError);  // duplicate
  EXPECT_THROW(Graph::FromText("3"), ParseError);
  EXPECT_THROW(Graph::FromText("3 2\n0 1\n"), ParseError);
  EXPECT_THROW(Graph::FromText("3 1\n0 1\n1 2\n"), ParseError);
  EXPECT_THROW(Graph::FromText("3 1\n0 -1\n"), ParseError);
  EXPECT_THROW(Graph::FromText("65 0\n"), ParseError);
}

TEST(Graph, ProperColoringAgreesWithReference) {
  Graph k3 = Triangle().graph;
  for (uint32_t code = 0; code < 81; ++code) {
    Bytes coloring;
    for (uint32_t c = code, k = 0; k < 4; ++k, c /= 3) coloring.push_back(c % 3);
    coloring.resize(code < 27 ? 3 : 4);
    EXPECT_EQ(k3.IsProperColoring(coloring),
              testing::ProperColoring(3, k3.edges(), Colors(coloring)));
  }
  EXPECT_FALSE(k3.IsProperColoring(Bytes{0, 1, 3}));
}

TEST(ColoringText, RoundTrip) {
  EXPECT_EQ(ColoringToText(Bytes{0, 2, 1}), "0 2 1\n");
  EXPECT_EQ(ColoringFromText("0 2\n1"), (Bytes{0, 2, 1}));
  EXPECT_THROW(ColoringFromText("0 3"), ParseError);
  EXPECT_THROW(ColoringFromText("01"), ParseError);
}

TEST(RandomColorableGraph, PlantedColoringIsProper) {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    uint32_t v = 2 + static_cast<uint32_t>(seed % 40);
    ColoredGraph g = RandomColorableGraph(v, rng, 0.1 + 0.004 * static_cast<double>(seed));
    EXPECT_EQ(g.graph.vertex_count(), v);
    EXPECT_FALSE(g.graph.edges().empty());
    EXPECT_TRUE(testing::ProperColoring(v, g.graph.edges(), Colors(g.coloring)));
  }
  Rng a(5), b(5);
  EXPECT_EQ(RandomColorableGraph(20, a).graph.Encode(), RandomColorableGraph(20, b).graph.Encode());
}

TEST(RandomColorableGraph, FullDensityKeepsEveryBichromaticPair) {
  Rng rng(6);
  ColoredGraph g = RandomColorableGraph(15, rng, 1.0);
  size_t pairs = 0;
  for (uint32_t u = 0; u < 15; ++u) {
    for (uint32_t v = u + 1; v < 15; ++v) pairs += g.coloring[u] != g.coloring[v];
  }
  EXPECT_EQ(g.graph.edges().size(), pairs);
}

TEST(ColoringProtocol, HonestMessagesArePermutedColors) {
  Rng rng(7);
  ColoredGraph g = RandomColorableGraph(12, rng);
  ColoringProtocol protocol(g.graph);
  EXPECT_EQ(protocol.message_count(), 12u);
  EXPECT_EQ(protocol.challenge_space().size(), g.graph.edges().size());
  for (int t = 0; t < 50; ++t) {
    auto first = protocol.Prepare(g.graph.Encode(), g.coloring, rng);
    ASSERT_EQ(first.messages.size(), 12u);
    EXPECT_TRUE(first.extra.empty());
    std::vector<uint8_t> colors;
    for (const Bytes& m : first.messages) {
      ASSERT_EQ(m.size(), 1 + ColoringProtocol::kBlindingBytes);
      colors.push_back(m[0]);
    }
    EXPECT_TRUE(testing::ProperColoring(12, g.graph.edges(), colors));
    // Same partition as the witness.
    for (uint32_t u = 0; u < 12; ++u) {
      for (uint32_t v = 0; v < 12; ++v) {
        EXPECT_EQ(colors[u] == colors[v], g.coloring[u] == g.coloring[v]);
      }
    }
  }
  EXPECT_THROW(protocol.Prepare(g.graph.Encode(), Bytes(12, 0), rng), NotColorable);
  EXPECT_THROW(ColoringProtocol(Graph(3, {})), ParseError);
}

TEST(ColoringProtocol, OpenedColorPairsAreUniform) {
  // Over the permutation randomness the opened endpoint colors are uniform
  // over the six ordered pairs of distinct symbols.
  ColoredGraph k3 = Triangle();
  ColoringProtocol protocol(k3.graph);
  Rng rng(14);
  std::map<std::pair<uint8_t, uint8_t>, int> counts;
  const int transcripts = 10000;
  for (int t = 0; t < transcripts; ++t) {
    auto first = protocol.Prepare(k3.graph.Encode(), k3.coloring, rng);
    auto [u, v] = k3.graph.edges()[t % 3];
    ++counts[{first.messages[u][0], first.messages[v][0]}];
  }
  ASSERT_EQ(counts.size(), 6u);
  double expected = transcripts / 6.0, chi2 = 0;
  for (const auto& [pair, c] : counts) {
    EXPECT_NE(pair.first, pair.second);
    chi2 += (c - expected) * (c - expected) / expected;
  }
  EXPECT_LT(chi2, 20.52);  // 5 degrees of freedom, p = 0.001
}

TEST(ColoringProtocol, CheatingMessagesBreakTheChosenEdge) {
  Rng rng(8);
  ColoredGraph g = RandomColorableGraph(10, rng, 0.7);
  ColoringProtocol protocol(g.graph);
  for (int t = 0; t < 50; ++t) {
    auto [messages, bad] = protocol.CheatingMessages(g.coloring, rng);
    auto [bu, bv] = g.graph.edges()[static_cast<size_t>(bad)];
    EXPECT_EQ(messages[bu][0], messages[bv][0]);
    // Every failing edge shares the recolored endpoint with e.
    for (auto [u, v] : g.graph.edges()) {
      if (messages[u][0] != messages[v][0]) continue;
      bool at_bu = u == bu || v == bu, at_bv = u == bv || v == bv;
      EXPECT_TRUE(at_bu || at_bv);
    }
  }
  ColoredGraph k3 = Triangle();
  ColoringProtocol triangle(k3.graph);
  for (int t = 0; t < 20; ++t) {
    auto [messages, bad] = triangle.CheatingMessages(k3.coloring, rng);
    for (size_t e = 0; e < 3; ++e) {
      auto [u, v] = k3.graph.edges()[e];
      EXPECT_EQ(messages[u][0] == messages[v][0], e == bad);
    }
  }
}

TEST(ColoringProtocol, CollisionCandidateKeepsTheColor) {
  Rng rng(9);
  Bytes m = {2, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
  Bytes c = ColoringProtocol::CollisionCandidate(m, rng);
  EXPECT_EQ(c.size(), m.size());
  EXPECT_EQ(c[0], 2);
  EXPECT_NE(c, m);
}

TEST(Dlog, DefaultGroupIsASafePrimeSubgroup) {
  DlogGroup group = DlogGroup::Default();
  boost::random::mt19937 gen(1);
  EXPECT_TRUE(boost::multiprecision::miller_rabin_test(cpp_int(group.p), 40, gen));
  EXPECT_TRUE(boost::multiprecision::miller_rabin_test(cpp_int(group.q), 40, gen));
  EXPECT_EQ(group.p, 2 * group.q + 1);
  EXPECT_LT(group.p, uint64_t{1} << 61);
  // Largest safe prime below 2^61.
  for (uint64_t p = group.p + 2; p < (uint64_t{1} << 61); p += 2) {
    bool safe = boost::multiprecision::miller_rabin_test(cpp_int(p), 25, gen) &&
                boost::multiprecision::miller_rabin_test(cpp_int((p - 1) / 2), 25, gen);
    EXPECT_FALSE(safe) << p;
  }
  EXPECT_EQ(testing::BigPowMod(group.g, group.q, group.p), 1u);
  EXPECT_NE(group.g % group.p, 1u);
}

TEST(Dlog, ModularArithmeticMatchesBigIntegers) {
  Rng rng(10);
  for (int t = 0; t < 1000; ++t) {
    uint64_t m = (rng() >> 1) | 3;
    uint64_t a = rng(), b = rng(), e = rng();
    EXPECT_EQ(MulMod(a, b, m), static_cast<uint64_t>(cpp_int(a) * b % m));
    EXPECT_EQ(PowMod(a, e, m), testing::BigPowMod(a, e, m));
  }
}

TEST(Dlog, EncodingsRoundTrip) {
  Rng rng(11);
  DlogKeyPair key = RandomDlogInstance(rng);
  EXPECT_TRUE(key.instance.IsValid());
  EXPECT_EQ(testing::BigPowMod(key.instance.group.g, key.w, key.instance.group.p), key.instance.x);
  Bytes enc = key.instance.Encode();
  ASSERT_EQ(enc.size(), 32u);
  DlogInstance back = DlogInstance::Decode(enc);
  EXPECT_EQ(back.Encode(), enc);
  EXPECT_EQ(DlogInstance::FromText(key.instance.ToText()).Encode(), enc);
  EXPECT_EQ(ScalarFromText(ScalarToText(key.w)), key.w);
  EXPECT_EQ(DecodeScalar(EncodeScalar(key.w)), key.w);
  EXPECT_THROW(DlogInstance::Decode(Bytes(31)), ParseError);
  EXPECT_THROW(DlogInstance::FromText("1 2 3"), ParseError);
  EXPECT_THROW(DlogInstance::FromText("1 2 3 zz"), ParseError);
  EXPECT_THROW(DecodeScalar(Bytes(7)), ParseError);
}

TEST(Dlog, ValidityChecks) {
  Rng rng(12);
  DlogInstance inst = RandomDlogInstance(rng).instance;
  DlogInstance bad = inst;
  bad.x = 0;
  EXPECT_FALSE(bad.IsValid());
  bad = inst;
  bad.group.g = inst.group.p - 1;  // order 2
  EXPECT_FALSE(bad.IsValid());
  bad = inst;
  bad.x = inst.group.p - 1;  // not a quadratic residue
  EXPECT_FALSE(bad.IsValid());
}

TEST(DlogSigma, HonestAndCheatingResponses) {
  Rng rng(13);
  DlogKeyPair key = RandomDlogInstance(rng);
  DlogSigma sigma;
  Bytes inst = key.instance.Encode(), witness = EncodeScalar(key.w);
  EXPECT_TRUE(sigma.CheckRelation(inst, witness));
  EXPECT_FALSE(sigma.CheckRelation(inst, EncodeScalar(key.w + 1)));
  SigmaCommitment com = sigma.Commit(inst, witness, rng);
  Bytes z0 = sigma.Respond(inst, witness, com, 0), z1 = sigma.Respond(inst, witness, com, 1);
  EXPECT_TRUE(sigma.Verify(inst, com.first_message, 0, z0));
  EXPECT_TRUE(sigma.Verify(inst, com.first_message, 1, z1));
  EXPECT_FALSE(sigma.Verify(inst, com.first_message, 1, z0));
  EXPECT_FALSE(sigma.Verify(inst, com.first_message, 2, z0));
  std::vector<ChallengeIndex> both = {0, 1};
  auto w = ExtractSigma(sigma, inst, com.first_message, both, std::vector<Bytes>{z0, z1});
  ASSERT_TRUE(w);
  EXPECT_EQ(DecodeScalar(*w), key.w);
  for (uint32_t b = 0; b < 2; ++b) {
    auto [a0, z] = DlogCheatingResponses(key.instance, b, rng);
    EXPECT_TRUE(sigma.Verify(inst, a0, b, z[b]));
    EXPECT_FALSE(sigma.Verify(inst, a0, 1 - b, z[1 - b]));
  }
}

}  // namespace
}  // namespace cnofs
