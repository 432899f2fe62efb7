#include "cnofs/cno.h"

#include <algorithm>

namespace cnofs {

std::optional<std::vector<Bytes>> OpenedMessages(const MessageVector& messages,
                                                 const Challenge& c) {
  std::vector<Bytes> out;
  out.reserve(c.size());
  for (uint32_t i : c) {
    if (i >= messages.size() || !messages[i]) return std::nullopt;
    out.push_back(*messages[i]);
  }
  return out;
}

IndexSet AnsweredChallenges(const CnOProtocol& protocol, ByteView inst,
                            const MessageVector& messages, ByteView extra) {
  const ChallengeSpace& space = protocol.challenge_space();
  if (space.size() > CnOProtocol::kMaxExtractionScan) {
    throw ChallengeSpaceTooLarge("challenge space too large to scan: " +
                                 ToString(space.size()));
  }
  IndexSet answered;
  for (ChallengeIndex index = 0; index < space.size(); ++index) {
    Challenge c = space.Unrank(index);
    auto opened = OpenedMessages(messages, c);
    if (opened && protocol.Predicate(inst, c, *opened, extra)) {
      answered.push_back(index);
    }
  }
  return answered;
}

std::optional<Bytes> CnOProtocol::ExtractStar(ByteView inst,
                                              const MessageVector& messages,
                                              ByteView extra) const {
  IndexSet answered = AnsweredChallenges(*this, inst, messages, extra);
  std::optional<IndexSet> chosen;
  soundness().ForEachMinimalSet([&](const IndexSet& set) {
    if (std::includes(answered.begin(), answered.end(), set.begin(), set.end())) {
      chosen = set;
      return false;
    }
    return true;
  });
  if (!chosen) return std::nullopt;
  auto witness = ExtractFromSet(inst, messages, extra, *chosen);
  if (!witness || !CheckRelation(inst, *witness)) return std::nullopt;
  return witness;
}

Commitment CommitOrdinary(Oracle& oracle, std::span<const Bytes> messages) {
  Commitment out;
  out.digests.reserve(messages.size());
  for (const Bytes& m : messages) {
    out.digests.push_back(oracle.Query(OracleInput::Msg(m)));
  }
  return out;
}

bool VerifyOrdinary(Oracle& oracle, const CnOProtocol& protocol, ByteView inst,
                    const Commitment& commitment, const Challenge& c,
                    std::span<const Bytes> opened, ByteView extra) {
  if (opened.size() != c.size()) return false;
  if (commitment.digests.size() != protocol.message_count()) return false;
  for (size_t k = 0; k < c.size(); ++k) {
    if (c[k] >= commitment.digests.size()) return false;
    if (opened[k].size() + 1 > oracle.max_input_bytes()) return false;
    if (oracle.Query(OracleInput::Msg(opened[k])) !=
        commitment.digests[c[k]]) {
      return false;
    }
  }
  return protocol.Predicate(inst, c, opened, extra);
}

ParallelRepetition::ParallelRepetition(std::shared_ptr<const CnOProtocol> base,
                                       uint32_t repetitions)
    : base_(std::move(base)), repetitions_(repetitions) {
  std::shared_ptr<const ChallengeSpace> base_space(base_,
                                                   &base_->challenge_space());
  std::shared_ptr<const SoundnessSystem> base_system(base_,
                                                     &base_->soundness());
  space_ = std::make_shared<ProductSpace>(base_space, base_->message_count(),
                                          repetitions);
  system_ = std::make_shared<ProductSystem>(base_system, repetitions);
}

Bytes ParallelRepetition::EncodeExtra(std::span<const Bytes> per_repetition,
                                      ByteView salt) {
  Bytes out;
  for (const Bytes& extra : per_repetition) AppendLengthPrefixed(out, extra);
  Append(out, salt);
  return out;
}

std::optional<std::vector<Bytes>> ParallelRepetition::DecodeExtra(
    ByteView extra) const {
  try {
    ByteReader reader(extra);
    std::vector<Bytes> out;
    out.reserve(repetitions_);
    for (uint32_t j = 0; j < repetitions_; ++j) {
      ByteView chunk = reader.ReadLengthPrefixed();
      out.emplace_back(chunk.begin(), chunk.end());
    }
    return out;
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

bool ParallelRepetition::Predicate(ByteView inst, const Challenge& c,
                                   std::span<const Bytes> opened,
                                   ByteView extra) const {
  if (opened.size() != c.size()) return false;
  auto extras = DecodeExtra(extra);
  if (!extras) return false;
  const uint32_t width = base_->message_count();
  size_t k = 0;
  for (uint32_t j = 0; j < repetitions_; ++j) {
    Challenge local;
    std::vector<Bytes> local_opened;
    while (k < c.size() && c[k] / width == j) {
      local.push_back(c[k] - j * width);
      local_opened.push_back(opened[k]);
      ++k;
    }
    if (!base_->Predicate(inst, local, local_opened, (*extras)[j])) {
      return false;
    }
  }
  return k == c.size();
}

std::optional<Bytes> ParallelRepetition::ExtractFromSet(
    ByteView inst, const MessageVector& messages, ByteView extra,
    std::span<const ChallengeIndex> set) const {
  auto extras = DecodeExtra(extra);
  if (!extras) return std::nullopt;
  const uint32_t width = base_->message_count();
  const SoundnessSystem& base_system = base_->soundness();
  for (uint32_t j = 0; j < repetitions_; ++j) {
    IndexSet projection;
    for (ChallengeIndex index : set) {
      projection.push_back(space_->Digits(index)[j]);
    }
    std::sort(projection.begin(), projection.end());
    projection.erase(std::unique(projection.begin(), projection.end()),
                     projection.end());
    if (!base_system.Contains(projection)) continue;
    // Shrink to a minimal member, dropping from the back.
    for (size_t k = projection.size(); k-- > 0;) {
      IndexSet smaller = projection;
      smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(k));
      if (base_system.Contains(smaller)) projection = std::move(smaller);
    }
    MessageVector local(messages.begin() + j * width,
                        messages.begin() + (j + 1) * width);
    return base_->ExtractFromSet(inst, local, (*extras)[j], projection);
  }
  return std::nullopt;
}

HonestFirstMessage ParallelRepetition::Prepare(ByteView inst, ByteView witness,
                                               Rng& rng) const {
  HonestFirstMessage out;
  std::vector<Bytes> extras;
  for (uint32_t j = 0; j < repetitions_; ++j) {
    HonestFirstMessage one = base_->Prepare(inst, witness, rng);
    for (Bytes& m : one.messages) out.messages.push_back(std::move(m));
    extras.push_back(std::move(one.extra));
  }
  out.extra = EncodeExtra(extras);
  return out;
}

std::optional<Bytes> ParallelRepetition::ExtractStar(
    ByteView inst, const MessageVector& messages, ByteView extra) const {
  auto extras = DecodeExtra(extra);
  if (!extras || messages.size() != message_count()) return std::nullopt;
  const uint32_t width = base_->message_count();
  for (uint32_t j = 0; j < repetitions_; ++j) {
    MessageVector local(messages.begin() + j * width,
                        messages.begin() + (j + 1) * width);
    if (auto witness = base_->ExtractStar(inst, local, (*extras)[j])) {
      return witness;
    }
  }
  return std::nullopt;
}

std::shared_ptr<const CnOProtocol> Borrow(const CnOProtocol& protocol) {
  return std::shared_ptr<const CnOProtocol>(std::shared_ptr<void>(), &protocol);
}

std::shared_ptr<const ParallelRepetition> ParallelRepeat(
    std::shared_ptr<const CnOProtocol> base, uint32_t repetitions) {
  return std::make_shared<ParallelRepetition>(std::move(base), repetitions);
}

}  // namespace cnofs
