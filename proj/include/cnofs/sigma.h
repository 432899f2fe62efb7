#pragma once

#include <optional>
#include <span>

#include "cnofs/bytes.h"
#include "cnofs/oracle.h"
#include "cnofs/soundness.h"

namespace cnofs {

class NotMinimalSet : public Error {
 public:
  using Error::Error;
};

// Prover-side first message of a plain sigma protocol together with the
// secret state needed to answer any challenge.
struct SigmaCommitment {
  Bytes first_message;
  Bytes state;
};

// A plain 3-round sigma protocol with challenges identified with
// {0, ..., challenge_count()-1}. Instances, first messages, responses and
// witnesses travel as canonical byte strings.
class SigmaProtocol {
 public:
  virtual ~SigmaProtocol() = default;

  virtual uint32_t challenge_count() const = 0;
  virtual const SoundnessSystem& soundness() const = 0;

  virtual SigmaCommitment Commit(ByteView inst, ByteView witness,
                                 Rng& rng) const = 0;
  // All responses for one commitment derive from the same state.
  virtual Bytes Respond(ByteView inst, ByteView witness,
                        const SigmaCommitment& commitment,
                        uint32_t challenge) const = 0;
  virtual bool Verify(ByteView inst, ByteView first_message,
                      uint32_t challenge, ByteView response) const = 0;

  // The raw E_S. Called only with S in S_min and verifying responses,
  // `responses[k]` answering challenge `set[k]`.
  virtual std::optional<Bytes> ExtractFromSet(
      ByteView inst, ByteView first_message,
      std::span<const ChallengeIndex> set,
      std::span<const Bytes> responses) const = 0;

  virtual bool CheckRelation(ByteView inst, ByteView witness) const = 0;
};

// E_S with its contract enforced: throws NotMinimalSet unless `set` is in
// S_min, returns nullopt if a response fails to verify, and otherwise a
// witness that passed CheckRelation (nullopt if the raw extractor failed).
std::optional<Bytes> ExtractSigma(const SigmaProtocol& sigma, ByteView inst,
                                  ByteView first_message,
                                  std::span<const ChallengeIndex> set,
                                  std::span<const Bytes> responses);

}  // namespace cnofs
