#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "cnofs/challenge.h"
#include "cnofs/cno.h"
#include "cnofs/fs.h"
#include "cnofs/sigma.h"

namespace cnofs {

// Work done by the pre-Unruh extractor.
struct PuExtractStats {
  uint64_t predicate_evaluations = 0;
  uint64_t membership_tests = 0;
};

// pU[Sigma]: commit to the response z_i for every challenge i, open one.
// m_i = z_i, a0 is Sigma's first message, C = {{0}, ..., {l0-1}}.
class PreUnruh : public CnOProtocol {
 public:
  static constexpr uint32_t kMaxChallenges = uint32_t{1} << 16;

  // Throws ChallengeSpaceTooLarge beyond kMaxChallenges.
  explicit PreUnruh(std::shared_ptr<const SigmaProtocol> sigma);

  uint32_t message_count() const override { return sigma_->challenge_count(); }
  const ChallengeSpace& challenge_space() const override { return space_; }
  const SoundnessSystem& soundness() const override { return sigma_->soundness(); }

  bool Predicate(ByteView inst, const Challenge& c, std::span<const Bytes> opened,
                 ByteView extra) const override;
  // Delegates to ExtractSigma; a set that is not minimal is a failure here.
  std::optional<Bytes> ExtractFromSet(
      ByteView inst, const MessageVector& messages, ByteView extra,
      std::span<const ChallengeIndex> set) const override;
  bool CheckRelation(ByteView inst, ByteView witness) const override {
    return sigma_->CheckRelation(inst, witness);
  }
  // All l0 responses come from a single Sigma commitment.
  HonestFirstMessage Prepare(ByteView inst, ByteView witness,
                             Rng& rng) const override;

  std::optional<Bytes> ExtractStar(ByteView inst, const MessageVector& messages,
                                   ByteView extra) const override {
    return ExtractStar(inst, messages, extra, nullptr);
  }
  // Evaluates V on every challenge, then shrinks the answered set to a
  // minimal member by dropping the largest removable index first. Uses at
  // most l0 + 1 membership tests.
  std::optional<Bytes> ExtractStar(ByteView inst, const MessageVector& messages,
                                   ByteView extra, PuExtractStats* stats) const;

  const SigmaProtocol& sigma() const { return *sigma_; }

 private:
  std::shared_ptr<const SigmaProtocol> sigma_;
  SingletonSpace space_;
};

// Unr_r (ordinary mode) or MPpU_r (Merkle mode): FS over pU[Sigma]^r.
FiatShamir UnruhTransform(std::shared_ptr<const SigmaProtocol> sigma,
                          uint32_t repetitions, Mode mode = Mode::kOrdinary,
                          bool allow_biased_gamma = false);

}  // namespace cnofs
