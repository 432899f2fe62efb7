#include "cnofs/sigma.h"

namespace cnofs {

std::optional<Bytes> ExtractSigma(const SigmaProtocol& sigma, ByteView inst,
                                  ByteView first_message,
                                  std::span<const ChallengeIndex> set,
                                  std::span<const Bytes> responses) {
  if (!IsMinimal(sigma.soundness(), set)) {
    throw NotMinimalSet("challenge set is not a minimal qualifying set");
  }
  if (responses.size() != set.size()) return std::nullopt;
  for (size_t k = 0; k < set.size(); ++k) {
    if (set[k] >= sigma.challenge_count()) return std::nullopt;
    if (!sigma.Verify(inst, first_message, static_cast<uint32_t>(set[k]),
                      responses[k])) {
      return std::nullopt;
    }
  }
  auto witness = sigma.ExtractFromSet(inst, first_message, set, responses);
  if (!witness || !sigma.CheckRelation(inst, *witness)) return std::nullopt;
  return witness;
}

}  // namespace cnofs
