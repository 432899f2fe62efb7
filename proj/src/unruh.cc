#include "cnofs/unruh.h"

namespace cnofs {

namespace {

uint32_t CheckedCount(const SigmaProtocol& sigma) {
  if (sigma.challenge_count() > PreUnruh::kMaxChallenges) {
    throw ChallengeSpaceTooLarge("pre-Unruh needs at most 2^16 challenges");
  }
  return sigma.challenge_count();
}

}  // namespace

PreUnruh::PreUnruh(std::shared_ptr<const SigmaProtocol> sigma)
    : sigma_(std::move(sigma)), space_(CheckedCount(*sigma_)) {}

bool PreUnruh::Predicate(ByteView inst, const Challenge& c,
                         std::span<const Bytes> opened, ByteView extra) const {
  if (c.size() != 1 || opened.size() != 1 || c[0] >= message_count()) return false;
  return sigma_->Verify(inst, extra, c[0], opened[0]);
}

std::optional<Bytes> PreUnruh::ExtractFromSet(
    ByteView inst, const MessageVector& messages, ByteView extra,
    std::span<const ChallengeIndex> set) const {
  std::vector<Bytes> responses;
  for (const ChallengeIndex& index : set) {
    if (index >= messages.size()) return std::nullopt;
    size_t i = static_cast<size_t>(index);
    if (!messages[i]) return std::nullopt;
    responses.push_back(*messages[i]);
  }
  try {
    return ExtractSigma(*sigma_, inst, extra, set, responses);
  } catch (const NotMinimalSet&) {
    return std::nullopt;
  }
}

HonestFirstMessage PreUnruh::Prepare(ByteView inst, ByteView witness,
                                     Rng& rng) const {
  SigmaCommitment commitment = sigma_->Commit(inst, witness, rng);
  HonestFirstMessage out;
  for (uint32_t i = 0; i < message_count(); ++i) {
    out.messages.push_back(sigma_->Respond(inst, witness, commitment, i));
  }
  out.extra = commitment.first_message;
  return out;
}

std::optional<Bytes> PreUnruh::ExtractStar(ByteView inst,
                                           const MessageVector& messages,
                                           ByteView extra,
                                           PuExtractStats* stats) const {
  PuExtractStats local;
  PuExtractStats& s = stats ? *stats : local;
  if (messages.size() != message_count()) return std::nullopt;
  IndexSet answered;
  for (uint32_t i = 0; i < message_count(); ++i) {
    if (!messages[i]) continue;
    ++s.predicate_evaluations;
    if (sigma_->Verify(inst, extra, i, *messages[i])) answered.push_back(i);
  }
  const SoundnessSystem& system = soundness();
  ++s.membership_tests;
  if (!system.Contains(answered)) return std::nullopt;
  for (size_t k = answered.size(); k-- > 0;) {
    IndexSet smaller = answered;
    smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(k));
    ++s.membership_tests;
    if (system.Contains(smaller)) answered = std::move(smaller);
  }
  return ExtractFromSet(inst, messages, extra, answered);
}

FiatShamir UnruhTransform(std::shared_ptr<const SigmaProtocol> sigma,
                          uint32_t repetitions, Mode mode,
                          bool allow_biased_gamma) {
  auto base = std::make_shared<PreUnruh>(std::move(sigma));
  FsOptions options;
  options.mode = mode;
  options.allow_biased_gamma = allow_biased_gamma;
  return FiatShamir(ParallelRepeat(base, repetitions), options);
}

}  // namespace cnofs
