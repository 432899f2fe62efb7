#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cnofs/challenge.h"
#include "cnofs/cno.h"
#include "cnofs/sigma.h"
#include "cnofs/soundness.h"

namespace cnofs {

class NotColorable : public Error {
 public:
  using Error::Error;
};

inline constexpr uint32_t kMaxVertices = 64;

// Undirected simple graph; edges are (u, v) with u < v, sorted and distinct.
class Graph {
 public:
  Graph(uint32_t vertex_count, std::vector<std::pair<uint32_t, uint32_t>> edges);

  uint32_t vertex_count() const { return vertex_count_; }
  const std::vector<std::pair<uint32_t, uint32_t>>& edges() const { return edges_; }

  // u8 V | u16 E | E x (u8 u, u8 v)
  Bytes Encode() const;
  static Graph Decode(ByteView data);

  // "V E" then one "u v" line per edge.
  std::string ToText() const;
  static Graph FromText(std::string_view text);

  // The coloring satisfies R: V symbols in {0,1,2}, endpoints differ.
  bool IsProperColoring(ByteView coloring) const;

 private:
  uint32_t vertex_count_;
  std::vector<std::pair<uint32_t, uint32_t>> edges_;
};

// Witness text form: V space-separated symbols.
std::string ColoringToText(ByteView coloring);
Bytes ColoringFromText(std::string_view text);

struct ColoredGraph {
  Graph graph;
  Bytes coloring;
};

// A random planted 3-coloring; every bichromatic pair becomes an edge with
// probability `edge_probability`. At least one edge is always present.
ColoredGraph RandomColorableGraph(uint32_t vertex_count, Rng& rng,
                                  double edge_probability = 0.5);

ColoredGraph Triangle();

// The classic commit-and-open protocol for 3-coloring: m_i is the permuted
// color of vertex i followed by 16 bytes of blinding randomness, challenges
// are edges, and every edge must be answered to extract.
class ColoringProtocol : public CnOProtocol {
 public:
  static constexpr size_t kBlindingBytes = 16;

  explicit ColoringProtocol(Graph graph);

  uint32_t message_count() const override { return graph_.vertex_count(); }
  const ChallengeSpace& challenge_space() const override { return space_; }
  const SoundnessSystem& soundness() const override { return system_; }

  bool Predicate(ByteView inst, const Challenge& c, std::span<const Bytes> opened,
                 ByteView extra) const override;
  std::optional<Bytes> ExtractFromSet(
      ByteView inst, const MessageVector& messages, ByteView extra,
      std::span<const ChallengeIndex> set) const override;
  bool CheckRelation(ByteView inst, ByteView witness) const override;
  // Throws NotColorable if `witness` is not a proper coloring.
  HonestFirstMessage Prepare(ByteView inst, ByteView witness,
                             Rng& rng) const override;

  // Messages for the witness with endpoint u of a random edge e = (u, v)
  // recolored to match v. Edge e fails, as does any other edge at u whose far
  // end has v's color; on a triangle only e fails. Returns the messages and
  // e's index.
  std::pair<std::vector<Bytes>, ChallengeIndex> CheatingMessages(
      ByteView witness, Rng& rng) const;

  // A fresh message with the same color as `message` and new blinding.
  static Bytes CollisionCandidate(ByteView message, Rng& rng);

  const Graph& graph() const { return graph_; }
  const Bytes& encoded() const { return encoded_; }

 private:
  Graph graph_;
  Bytes encoded_;
  ExplicitSpace space_;
  ThresholdSystem system_;
};

// Discrete logarithm in a prime-order subgroup of Z_p^*.
struct DlogGroup {
  uint64_t p = 0;
  uint64_t q = 0;  // subgroup order, (p-1)/2 for the default group
  uint64_t g = 0;

  // The largest safe prime below 2^61 and the generator 4 of its
  // quadratic-residue subgroup.
  static DlogGroup Default() {
    return {0x1ffffffffffff6bbULL, 0x0ffffffffffffb5dULL, 4};
  }
};

uint64_t MulMod(uint64_t a, uint64_t b, uint64_t m);
uint64_t PowMod(uint64_t base, uint64_t exp, uint64_t m);

struct DlogInstance {
  DlogGroup group;
  uint64_t x = 0;  // X = g^w

  // p | g | q | X, 8 bytes each.
  Bytes Encode() const;
  static DlogInstance Decode(ByteView data);

  // "p g q X" as hex fields.
  std::string ToText() const;
  static DlogInstance FromText(std::string_view text);

  // g has order q and X lies in the subgroup.
  bool IsValid() const;
};

Bytes EncodeScalar(uint64_t w);
uint64_t DecodeScalar(ByteView data);
std::string ScalarToText(uint64_t w);
uint64_t ScalarFromText(std::string_view text);

struct DlogKeyPair {
  DlogInstance instance;
  uint64_t w = 0;
};

DlogKeyPair RandomDlogInstance(Rng& rng, DlogGroup group = DlogGroup::Default());

// A first message and responses that verify for challenge `b` only:
// a0 = g^z X^{-b} for random z, the other response random.
std::pair<Bytes, std::vector<Bytes>> DlogCheatingResponses(const DlogInstance& inst,
                                                          uint32_t b, Rng& rng);

// Schnorr-style identification with binary challenges: a0 = g^k,
// z = k + c w mod q, accept iff g^z = a0 X^c. Two answers reveal w.
class DlogSigma : public SigmaProtocol {
 public:
  DlogSigma() : system_(2, 2) {}

  uint32_t challenge_count() const override { return 2; }
  const SoundnessSystem& soundness() const override { return system_; }

  SigmaCommitment Commit(ByteView inst, ByteView witness, Rng& rng) const override;
  Bytes Respond(ByteView inst, ByteView witness, const SigmaCommitment& commitment,
                uint32_t challenge) const override;
  bool Verify(ByteView inst, ByteView first_message, uint32_t challenge,
              ByteView response) const override;
  std::optional<Bytes> ExtractFromSet(ByteView inst, ByteView first_message,
                                      std::span<const ChallengeIndex> set,
                                      std::span<const Bytes> responses) const override;
  bool CheckRelation(ByteView inst, ByteView witness) const override;

 private:
  ThresholdSystem system_;
};

}  // namespace cnofs
