#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cnofs/cno.h"
#include "cnofs/merkle.h"
#include "cnofs/oracle.h"

namespace cnofs {

class BiasBudgetViolated : public Error {
 public:
  using Error::Error;
};

enum class Mode : uint8_t {
  kOrdinary = 0x00,
  kMerkle = 0x01,
};

inline constexpr uint8_t kProofMagic[4] = {0x43, 0x4E, 0x4F, 0x46};
inline constexpr uint8_t kProofVersion = 0x01;

struct OpenedMessage {
  uint32_t index = 0;
  Bytes message;

  friend bool operator==(const OpenedMessage&, const OpenedMessage&) = default;
};

struct NizkProof {
  Mode mode = Mode::kOrdinary;
  // l of the protocol, before any Merkle padding.
  uint32_t message_count = 0;
  std::vector<OpenedMessage> opened;
  // l digests in ordinary mode, the single root in Merkle mode.
  std::vector<Digest> commitment;
  Octopus octopus;
  // a0; the empty string is encoded as absent.
  Bytes extra;

  friend bool operator==(const NizkProof&, const NizkProof&) = default;
};

// Wire format, all integers big-endian:
//   magic "CNOF" | version 01 | mode | l (4) | #opened (2)
//   | per opened: index (4) | length (4) | message
//   | commitment digests
//   | Merkle only: #octopus (2) | per entry: depth (1) | bits (ceil(h/8)) | label
//   | optional: length (4) | a0
Bytes SerializeProof(const NizkProof& proof);
// Throws ParseError on any deviation, including trailing bytes and
// non-canonical vertex encodings.
NizkProof ParseProof(ByteView data, size_t digest_bytes);

// The big-endian integer value of `h` modulo `modulus`.
ChallengeIndex ReduceDigest(const Digest& h, ChallengeIndex modulus);

// Throws BiasBudgetViolated unless n >= 64 + ceil(log2 size).
void CheckBiasBudget(size_t digest_bits, ChallengeIndex size);

// gamma(h) = unrank(h mod |C|).
Challenge Gamma(const Digest& h, const ChallengeSpace& space,
                bool allow_biased = false);

// Candidates SHAKE(CHAL(h || j)) for j = 0, 1, ..., mapped through gamma on
// the unrestricted space; the first admitted one wins.
Challenge GammaBounded(const Digest& h, const BoundedChallengeSpace& space,
                       bool allow_biased = false);

struct FsOptions {
  Mode mode = Mode::kOrdinary;
  bool allow_biased_gamma = false;
  // Merkle mode only: restrict C to challenges with small octopuses.
  std::optional<size_t> octopus_bound;
};

// A CHAL input split back into its fields.
struct ChallengeRecord {
  Bytes inst;
  std::vector<Digest> commitment;
  Bytes extra;
  std::optional<Bytes> msg;
};

// FS[Pi] in ordinary or Merkle mode, plus the signature variant that binds a
// message into the challenge.
class FiatShamir {
 public:
  // Prover-side commitment state.
  struct Committed {
    std::vector<Bytes> messages;  // padded in Merkle mode
    std::vector<Digest> commitment;
    std::optional<MerkleTree> tree;
  };

  // Messages pad Merkle trees up to a power of two.
  static inline const Bytes kPadding = {0x00};

  FiatShamir(std::shared_ptr<const CnOProtocol> protocol, FsOptions options);

  const CnOProtocol& protocol() const { return *protocol_; }
  std::shared_ptr<const CnOProtocol> shared_protocol() const { return protocol_; }
  const FsOptions& options() const { return options_; }
  uint32_t tree_height() const { return tree_height_; }
  const BoundedChallengeSpace* bounded_space() const { return bounded_.get(); }

  Committed Commit(Oracle& oracle, std::span<const Bytes> messages) const;

  // u32 |inst| | inst | commitment | u32 |a0| | a0 [| u32 |msg| | msg]
  static Bytes ChallengePayload(ByteView inst, std::span<const Digest> commitment,
                                ByteView extra, std::optional<ByteView> msg);
  std::optional<ChallengeRecord> ParseChallengePayload(ByteView payload,
                                                       size_t digest_bytes) const;

  Challenge ChallengeFromDigest(const Digest& h) const;
  Challenge DeriveChallenge(Oracle& oracle, ByteView inst,
                            std::span<const Digest> commitment, ByteView extra,
                            std::optional<ByteView> msg = std::nullopt) const;

  NizkProof Open(const Committed& committed, const Challenge& c,
                 ByteView extra) const;

  NizkProof Prove(Oracle& oracle, ByteView inst, ByteView witness, Rng& rng) const;
  NizkProof Sign(Oracle& oracle, ByteView inst, ByteView witness, ByteView msg,
                 Rng& rng) const;

  bool Verify(Oracle& oracle, ByteView inst, const NizkProof& proof) const;
  bool Verify(Oracle& oracle, ByteView inst, ByteView serialized) const;
  bool SigVerify(Oracle& oracle, ByteView inst, ByteView msg,
                 const NizkProof& proof) const;
  bool SigVerify(Oracle& oracle, ByteView inst, ByteView msg,
                 ByteView serialized) const;

  // m := D^{-1}(y) per committed position (ordinary) or MRoot_D^{-1}(y)
  // truncated to l (Merkle).
  MessageVector InvertCommitment(const Database& db,
                                 std::span<const Digest> commitment) const;

 private:
  NizkProof ProveImpl(Oracle& oracle, ByteView inst, ByteView witness,
                      std::optional<ByteView> msg, Rng& rng) const;
  bool VerifyImpl(Oracle& oracle, ByteView inst, const NizkProof& proof,
                  std::optional<ByteView> msg) const;

  std::shared_ptr<const CnOProtocol> protocol_;
  FsOptions options_;
  uint32_t tree_height_ = 0;
  std::shared_ptr<const BoundedChallengeSpace> bounded_;
};

}  // namespace cnofs
