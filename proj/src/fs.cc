#include "cnofs/fs.h"

#include <algorithm>
#include <bit>

#include <boost/multiprecision/cpp_int.hpp>

namespace cnofs {

namespace {

constexpr uint64_t kMaxBoundedCandidates = uint64_t{1} << 20;

size_t VertexBytes(uint32_t h) { return (h + 7) / 8; }

}  // namespace

Bytes SerializeProof(const NizkProof& proof) {
  if (proof.opened.size() > 0xffff || proof.octopus.size() > 0xffff) {
    throw InvalidChallenge("proof too large to encode");
  }
  Bytes out(std::begin(kProofMagic), std::end(kProofMagic));
  AppendU8(out, kProofVersion);
  AppendU8(out, static_cast<uint8_t>(proof.mode));
  AppendU32(out, proof.message_count);
  AppendU16(out, static_cast<uint16_t>(proof.opened.size()));
  for (const OpenedMessage& entry : proof.opened) {
    AppendU32(out, entry.index);
    AppendLengthPrefixed(out, entry.message);
  }
  for (const Digest& d : proof.commitment) Append(out, d.bytes());
  if (proof.mode == Mode::kMerkle) {
    const size_t width = VertexBytes(TreeHeight(proof.message_count));
    AppendU16(out, static_cast<uint16_t>(proof.octopus.size()));
    for (const OctopusEntry& entry : proof.octopus) {
      AppendU8(out, static_cast<uint8_t>(entry.vertex.depth));
      for (size_t k = width; k-- > 0;) {
        AppendU8(out, static_cast<uint8_t>(entry.vertex.bits >> (8 * k)));
      }
      Append(out, entry.label.bytes());
    }
  }
  if (!proof.extra.empty()) AppendLengthPrefixed(out, proof.extra);
  return out;
}

NizkProof ParseProof(ByteView data, size_t digest_bytes) {
  ByteReader reader(data);
  ByteView magic = reader.ReadBytes(4);
  if (!std::equal(magic.begin(), magic.end(), std::begin(kProofMagic))) {
    throw ParseError("bad proof magic");
  }
  if (reader.ReadU8() != kProofVersion) throw ParseError("unsupported proof version");
  NizkProof proof;
  uint8_t mode = reader.ReadU8();
  if (mode > static_cast<uint8_t>(Mode::kMerkle)) throw ParseError("unknown proof mode");
  proof.mode = static_cast<Mode>(mode);
  proof.message_count = reader.ReadU32();
  uint16_t opened = reader.ReadU16();
  for (uint16_t k = 0; k < opened; ++k) {
    OpenedMessage entry;
    entry.index = reader.ReadU32();
    ByteView m = reader.ReadLengthPrefixed();
    entry.message.assign(m.begin(), m.end());
    proof.opened.push_back(std::move(entry));
  }
  size_t digests = proof.mode == Mode::kMerkle ? 1 : proof.message_count;
  if (digests > reader.remaining() / std::max<size_t>(digest_bytes, 1)) {
    throw ParseError("truncated commitment");
  }
  for (size_t k = 0; k < digests; ++k) {
    ByteView d = reader.ReadBytes(digest_bytes);
    proof.commitment.emplace_back(Bytes(d.begin(), d.end()));
  }
  if (proof.mode == Mode::kMerkle) {
    const uint32_t h = TreeHeight(proof.message_count);
    const size_t width = VertexBytes(h);
    uint16_t count = reader.ReadU16();
    for (uint16_t k = 0; k < count; ++k) {
      OctopusEntry entry;
      entry.vertex.depth = reader.ReadU8();
      if (entry.vertex.depth == 0 || entry.vertex.depth > h) {
        throw ParseError("octopus vertex depth out of range");
      }
      uint64_t bits = 0;
      for (size_t b = 0; b < width; ++b) bits = (bits << 8) | reader.ReadU8();
      if (entry.vertex.depth < 64 && (bits >> entry.vertex.depth) != 0) {
        throw ParseError("non-canonical octopus vertex");
      }
      entry.vertex.bits = bits;
      ByteView d = reader.ReadBytes(digest_bytes);
      entry.label = Digest(Bytes(d.begin(), d.end()));
      proof.octopus.push_back(std::move(entry));
    }
  }
  if (!reader.done()) {
    ByteView extra = reader.ReadLengthPrefixed();
    if (extra.empty()) throw ParseError("empty a0 must be omitted");
    proof.extra.assign(extra.begin(), extra.end());
  }
  if (!reader.done()) throw ParseError("trailing bytes after proof");
  return proof;
}

ChallengeIndex ReduceDigest(const Digest& h, ChallengeIndex modulus) {
  if (modulus == 0) throw InvalidChallenge("empty challenge space");
  // Horner's rule keeps the running remainder below modulus * 256.
  using boost::multiprecision::cpp_int;
  cpp_int m(modulus), rem = 0;
  for (uint8_t b : h.bytes()) rem = ((rem << 8) | b) % m;
  return static_cast<ChallengeIndex>(rem);
}

void CheckBiasBudget(size_t digest_bits, ChallengeIndex size) {
  size_t needed = 64 + CeilLog2(size);
  if (digest_bits < needed) {
    throw BiasBudgetViolated("challenge derivation needs n >= " +
                             std::to_string(needed) + ", have " +
                             std::to_string(digest_bits));
  }
}

Challenge Gamma(const Digest& h, const ChallengeSpace& space, bool allow_biased) {
  if (!allow_biased) CheckBiasBudget(h.bits(), space.size());
  return space.Unrank(ReduceDigest(h, space.size()));
}

Challenge GammaBounded(const Digest& h, const BoundedChallengeSpace& space,
                       bool allow_biased) {
  const ChallengeSpace& base = space.base();
  if (!allow_biased) CheckBiasBudget(h.bits(), base.size());
  for (uint64_t j = 0; j < kMaxBoundedCandidates; ++j) {
    Bytes seed(h.bytes().begin(), h.bytes().end());
    AppendU64(seed, j);
    Digest candidate = ConcreteHash(OracleInput::Chal(seed).Encode(), h.bits());
    Challenge c = base.Unrank(ReduceDigest(candidate, base.size()));
    if (space.Contains(c)) return c;
  }
  throw EmptyRestriction("no admissible challenge among the expanded candidates");
}

FiatShamir::FiatShamir(std::shared_ptr<const CnOProtocol> protocol,
                       FsOptions options)
    : protocol_(std::move(protocol)), options_(options) {
  if (options_.mode == Mode::kMerkle) {
    tree_height_ = TreeHeight(protocol_->message_count());
    if (options_.octopus_bound) {
      std::shared_ptr<const ChallengeSpace> space(protocol_,
                                                  &protocol_->challenge_space());
      bounded_ = std::make_shared<BoundedChallengeSpace>(
          space, *options_.octopus_bound, tree_height_);
    }
  } else if (options_.octopus_bound) {
    throw InvalidChallenge("an octopus bound needs Merkle mode");
  }
}

FiatShamir::Committed FiatShamir::Commit(Oracle& oracle,
                                         std::span<const Bytes> messages) const {
  Committed out;
  out.messages.assign(messages.begin(), messages.end());
  if (options_.mode == Mode::kOrdinary) {
    out.commitment = CommitOrdinary(oracle, messages).digests;
    return out;
  }
  out.messages.resize(size_t{1} << tree_height_, kPadding);
  out.tree = MerkleTree::Build(oracle, out.messages);
  out.commitment = {out.tree->root()};
  return out;
}

Bytes FiatShamir::ChallengePayload(ByteView inst,
                                   std::span<const Digest> commitment,
                                   ByteView extra, std::optional<ByteView> msg) {
  Bytes out;
  AppendLengthPrefixed(out, inst);
  for (const Digest& d : commitment) Append(out, d.bytes());
  AppendLengthPrefixed(out, extra);
  if (msg) AppendLengthPrefixed(out, *msg);
  return out;
}

std::optional<ChallengeRecord> FiatShamir::ParseChallengePayload(
    ByteView payload, size_t digest_bytes) const {
  try {
    ByteReader reader(payload);
    ChallengeRecord record;
    ByteView inst = reader.ReadLengthPrefixed();
    record.inst.assign(inst.begin(), inst.end());
    size_t digests =
        options_.mode == Mode::kMerkle ? 1 : protocol_->message_count();
    for (size_t k = 0; k < digests; ++k) {
      ByteView d = reader.ReadBytes(digest_bytes);
      record.commitment.emplace_back(Bytes(d.begin(), d.end()));
    }
    ByteView extra = reader.ReadLengthPrefixed();
    record.extra.assign(extra.begin(), extra.end());
    if (!reader.done()) {
      ByteView msg = reader.ReadLengthPrefixed();
      record.msg = Bytes(msg.begin(), msg.end());
    }
    if (!reader.done()) return std::nullopt;
    return record;
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

Challenge FiatShamir::ChallengeFromDigest(const Digest& h) const {
  if (bounded_) return GammaBounded(h, *bounded_, options_.allow_biased_gamma);
  return Gamma(h, protocol_->challenge_space(), options_.allow_biased_gamma);
}

Challenge FiatShamir::DeriveChallenge(Oracle& oracle, ByteView inst,
                                      std::span<const Digest> commitment,
                                      ByteView extra,
                                      std::optional<ByteView> msg) const {
  Digest h = oracle.Query(
      OracleInput::Chal(ChallengePayload(inst, commitment, extra, msg)));
  return ChallengeFromDigest(h);
}

NizkProof FiatShamir::Open(const Committed& committed, const Challenge& c,
                           ByteView extra) const {
  NizkProof proof;
  proof.mode = options_.mode;
  proof.message_count = protocol_->message_count();
  for (uint32_t i : c) proof.opened.push_back({i, committed.messages.at(i)});
  proof.commitment = committed.commitment;
  if (committed.tree) proof.octopus = committed.tree->Open(c);
  proof.extra.assign(extra.begin(), extra.end());
  return proof;
}

NizkProof FiatShamir::ProveImpl(Oracle& oracle, ByteView inst, ByteView witness,
                                std::optional<ByteView> msg, Rng& rng) const {
  HonestFirstMessage first = protocol_->Prepare(inst, witness, rng);
  Committed committed = Commit(oracle, first.messages);
  Challenge c =
      DeriveChallenge(oracle, inst, committed.commitment, first.extra, msg);
  return Open(committed, c, first.extra);
}

NizkProof FiatShamir::Prove(Oracle& oracle, ByteView inst, ByteView witness,
                            Rng& rng) const {
  return ProveImpl(oracle, inst, witness, std::nullopt, rng);
}

NizkProof FiatShamir::Sign(Oracle& oracle, ByteView inst, ByteView witness,
                           ByteView msg, Rng& rng) const {
  return ProveImpl(oracle, inst, witness, msg, rng);
}

bool FiatShamir::VerifyImpl(Oracle& oracle, ByteView inst,
                            const NizkProof& proof,
                            std::optional<ByteView> msg) const {
  if (proof.mode != options_.mode) return false;
  if (proof.message_count != protocol_->message_count()) return false;
  size_t digests = options_.mode == Mode::kMerkle ? 1 : proof.message_count;
  if (proof.commitment.size() != digests) return false;
  for (const Digest& d : proof.commitment) {
    if (d.size() != oracle.digest_bytes()) return false;
  }
  if (options_.mode == Mode::kOrdinary && !proof.octopus.empty()) return false;
  try {
    Challenge c = DeriveChallenge(oracle, inst, proof.commitment, proof.extra, msg);
    if (proof.opened.size() != c.size()) return false;
    std::vector<Bytes> opened;
    opened.reserve(c.size());
    for (size_t k = 0; k < c.size(); ++k) {
      if (proof.opened[k].index != c[k]) return false;
      opened.push_back(proof.opened[k].message);
    }
    if (options_.mode == Mode::kOrdinary) {
      return VerifyOrdinary(oracle, *protocol_, inst, {proof.commitment}, c,
                            opened, proof.extra);
    }
    return OctoVerify(oracle, c, tree_height_, proof.commitment[0], opened,
                      proof.octopus) &&
           protocol_->Predicate(inst, c, opened, proof.extra);
  } catch (const InputTooLong&) {
    return false;
  }
}

bool FiatShamir::Verify(Oracle& oracle, ByteView inst,
                        const NizkProof& proof) const {
  return VerifyImpl(oracle, inst, proof, std::nullopt);
}

bool FiatShamir::Verify(Oracle& oracle, ByteView inst, ByteView serialized) const {
  NizkProof proof;
  try {
    proof = ParseProof(serialized, oracle.digest_bytes());
  } catch (const ParseError&) {
    return false;
  }
  return Verify(oracle, inst, proof);
}

bool FiatShamir::SigVerify(Oracle& oracle, ByteView inst, ByteView msg,
                           const NizkProof& proof) const {
  return VerifyImpl(oracle, inst, proof, msg);
}

bool FiatShamir::SigVerify(Oracle& oracle, ByteView inst, ByteView msg,
                           ByteView serialized) const {
  NizkProof proof;
  try {
    proof = ParseProof(serialized, oracle.digest_bytes());
  } catch (const ParseError&) {
    return false;
  }
  return SigVerify(oracle, inst, msg, proof);
}

MessageVector FiatShamir::InvertCommitment(
    const Database& db, std::span<const Digest> commitment) const {
  const size_t count = protocol_->message_count();
  if (options_.mode == Mode::kMerkle) {
    if (commitment.size() != 1) return MessageVector(count);
    MessageVector all = MRootInverse(db, commitment[0], tree_height_);
    all.resize(count);
    return all;
  }
  MessageVector out(count);
  for (size_t i = 0; i < count && i < commitment.size(); ++i) {
    auto pre = db.Inverse(commitment[i]);
    if (pre && !pre->empty() && (*pre)[0] == static_cast<uint8_t>(Tag::kMsg)) {
      out[i] = Bytes(pre->begin() + 1, pre->end());
    }
  }
  return out;
}

}  // namespace cnofs
