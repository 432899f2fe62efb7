#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cnofs/challenge.h"
#include "cnofs/oracle.h"
#include "cnofs/soundness.h"

namespace cnofs {

// Committed messages as seen by an extractor; nullopt stands for "no preimage".
using MessageVector = std::vector<std::optional<Bytes>>;

// Output of an honest prover's first round: the l messages to commit to and
// the extra first-message string a0.
struct HonestFirstMessage {
  std::vector<Bytes> messages;
  Bytes extra;
};

// A commit-and-open sigma protocol: l committed messages, a challenge space
// C within 2^[l], a predicate V on the opened messages, and an S-soundness
// extractor.
class CnOProtocol {
 public:
  // Extraction enumerates C; beyond this size it refuses.
  static inline const ChallengeIndex kMaxExtractionScan = ChallengeIndex{1} << 20;

  virtual ~CnOProtocol() = default;

  virtual uint32_t message_count() const = 0;
  virtual const ChallengeSpace& challenge_space() const = 0;
  virtual const SoundnessSystem& soundness() const = 0;

  // V(inst, c, m_c, a0); `opened[k]` is the message at index c[k].
  virtual bool Predicate(ByteView inst, const Challenge& c,
                         std::span<const Bytes> opened, ByteView extra) const = 0;

  // E_S for a set of challenge indices in S_min. May return garbage when the
  // openings do not verify; callers check the relation.
  virtual std::optional<Bytes> ExtractFromSet(
      ByteView inst, const MessageVector& messages, ByteView extra,
      std::span<const ChallengeIndex> set) const = 0;

  virtual bool CheckRelation(ByteView inst, ByteView witness) const = 0;

  virtual HonestFirstMessage Prepare(ByteView inst, ByteView witness,
                                     Rng& rng) const = 0;

  // E*: computes the answered set, picks the lexicographically first S in
  // S_min inside it and runs E_S. Returns only relation-checked witnesses.
  virtual std::optional<Bytes> ExtractStar(ByteView inst,
                                           const MessageVector& messages,
                                           ByteView extra) const;

  size_t kappa() const { return challenge_space().max_challenge_size(); }
};

// m_c if every index of c is inside `messages` and defined.
std::optional<std::vector<Bytes>> OpenedMessages(const MessageVector& messages,
                                                 const Challenge& c);

// {index of c in C : m_c defined and V(inst, c, m_c, a0)}. Throws
// ChallengeSpaceTooLarge beyond CnOProtocol::kMaxExtractionScan.
IndexSet AnsweredChallenges(const CnOProtocol& protocol, ByteView inst,
                            const MessageVector& messages, ByteView extra);

struct Commitment {
  std::vector<Digest> digests;
};

// y_i = H(MSG(m_i)), queried in index order.
Commitment CommitOrdinary(Oracle& oracle, std::span<const Bytes> messages);

// H(MSG(m_i)) = y_i for all i in c, and V. Malformed input yields false.
bool VerifyOrdinary(Oracle& oracle, const CnOProtocol& protocol, ByteView inst,
                    const Commitment& commitment, const Challenge& c,
                    std::span<const Bytes> opened, ByteView extra);

// r-fold parallel repetition. The first-message string is the concatenation
// of r length-prefixed per-repetition strings; any trailing bytes form a salt
// that is bound into the challenge but ignored by the predicate.
class ParallelRepetition : public CnOProtocol {
 public:
  ParallelRepetition(std::shared_ptr<const CnOProtocol> base,
                     uint32_t repetitions);

  uint32_t message_count() const override {
    return repetitions_ * base_->message_count();
  }
  const ChallengeSpace& challenge_space() const override { return *space_; }
  const SoundnessSystem& soundness() const override { return *system_; }

  bool Predicate(ByteView inst, const Challenge& c,
                 std::span<const Bytes> opened, ByteView extra) const override;
  std::optional<Bytes> ExtractFromSet(
      ByteView inst, const MessageVector& messages, ByteView extra,
      std::span<const ChallengeIndex> set) const override;
  bool CheckRelation(ByteView inst, ByteView witness) const override {
    return base_->CheckRelation(inst, witness);
  }
  HonestFirstMessage Prepare(ByteView inst, ByteView witness,
                             Rng& rng) const override;

  // Brute force in every repetition; the first repetition that yields a
  // witness wins.
  std::optional<Bytes> ExtractStar(ByteView inst, const MessageVector& messages,
                                   ByteView extra) const override;

  static Bytes EncodeExtra(std::span<const Bytes> per_repetition,
                           ByteView salt = {});
  std::optional<std::vector<Bytes>> DecodeExtra(ByteView extra) const;

  const CnOProtocol& base() const { return *base_; }
  uint32_t repetitions() const { return repetitions_; }
  const ProductSpace& product_space() const { return *space_; }

 private:
  std::shared_ptr<const CnOProtocol> base_;
  uint32_t repetitions_;
  std::shared_ptr<const ProductSpace> space_;
  std::shared_ptr<const ProductSystem> system_;
};

// Non-owning shared_ptr to a protocol whose lifetime the caller manages.
std::shared_ptr<const CnOProtocol> Borrow(const CnOProtocol& protocol);

std::shared_ptr<const ParallelRepetition> ParallelRepeat(
    std::shared_ptr<const CnOProtocol> base, uint32_t repetitions);

}  // namespace cnofs
