#include "cnofs/extract.h"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace cnofs {

namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t CommitQueries(const FiatShamir& scheme) {
  if (scheme.options().mode == Mode::kMerkle) {
    return (uint64_t{2} << scheme.tree_height()) - 1;
  }
  return scheme.protocol().message_count();
}

std::vector<Bytes> Select(const std::vector<Bytes>& messages, const Challenge& c) {
  std::vector<Bytes> out;
  for (uint32_t i : c) out.push_back(messages.at(i));
  return out;
}

}  // namespace

uint64_t TrialSeed(uint64_t seed, uint64_t trial_id) {
  return SplitMix64(SplitMix64(seed) ^ trial_id);
}

bool SucCheck(const Database& db, const FiatShamir& scheme, size_t digest_bits,
              const SucOptions& options) {
  const CnOProtocol& protocol = scheme.protocol();
  const size_t digest_bytes = digest_bits / 8;
  std::map<Bytes, MessageVector> inverted;
  std::map<Bytes, bool> extracted;
  for (const auto& [encoded, digest] : db.entries()) {
    if (encoded.empty() || encoded[0] != static_cast<uint8_t>(Tag::kChal)) continue;
    auto record = scheme.ParseChallengePayload(
        ByteView(encoded).subspan(1), digest_bytes);
    if (!record) continue;
    if (options.inst && record->inst != *options.inst) continue;

    Bytes commitment_key;
    for (const Digest& d : record->commitment) Append(commitment_key, d.bytes());
    auto it = inverted.find(commitment_key);
    if (it == inverted.end()) {
      it = inverted.emplace(commitment_key,
                            scheme.InvertCommitment(db, record->commitment)).first;
    }
    const MessageVector& messages = it->second;

    Challenge c;
    try {
      c = scheme.ChallengeFromDigest(digest);
    } catch (const Error&) {
      continue;
    }
    auto opened = OpenedMessages(messages, c);
    if (!opened || !protocol.Predicate(record->inst, c, *opened, record->extra)) {
      continue;
    }
    Bytes extract_key = commitment_key;
    AppendLengthPrefixed(extract_key, record->inst);
    Append(extract_key, record->extra);
    auto done = extracted.find(extract_key);
    if (done == extracted.end()) {
      bool ok = protocol.ExtractStar(record->inst, messages, record->extra)
                    .has_value();
      done = extracted.emplace(std::move(extract_key), ok).first;
    }
    if (!done->second) return true;
  }
  return false;
}

ExtractionOutcome OnlineExtract(const Prover& prover, const FiatShamir& scheme,
                                size_t digest_bits, uint64_t seed,
                                std::optional<Bytes> msg, Database* final_db) {
  RecordingOracle oracle(digest_bits, SplitMix64(seed ^ 0x6f7261636c65ULL));
  Rng rng(SplitMix64(seed ^ 0x70726f766572ULL));
  ExtractionOutcome outcome;

  ProverOutput out;
  {
    BudgetedOracle handle(oracle, prover.query_budget());
    out = prover.Run(handle, rng);
    outcome.queries_used = handle.used();
  }
  outcome.aux = out.aux;

  std::optional<NizkProof> proof;
  try {
    proof = ParseProof(out.proof, oracle.digest_bytes());
  } catch (const ParseError&) {
  }
  if (proof) {
    outcome.accepted = msg ? scheme.SigVerify(oracle, out.inst, *msg, *proof)
                           : scheme.Verify(oracle, out.inst, *proof);
    MessageVector messages =
        scheme.InvertCommitment(oracle.database(), proof->commitment);
    outcome.witness =
        scheme.protocol().ExtractStar(out.inst, messages, proof->extra);
  }

  const Database& db = oracle.database();
  outcome.suc = SucCheck(db, scheme, digest_bits, {out.inst});
  outcome.cl = db.HasCollision();
  outcome.db_size = db.size();
  if (final_db) *final_db = db;
  return outcome;
}

HonestProver::HonestProver(const FiatShamir& scheme, Bytes inst, Bytes witness,
                           std::optional<Bytes> msg)
    : scheme_(scheme),
      inst_(std::move(inst)),
      witness_(std::move(witness)),
      msg_(std::move(msg)) {}

ProverOutput HonestProver::Run(Oracle& oracle, Rng& rng) const {
  NizkProof proof = msg_ ? scheme_.Sign(oracle, inst_, witness_, *msg_, rng)
                         : scheme_.Prove(oracle, inst_, witness_, rng);
  return {inst_, SerializeProof(proof), {}};
}

uint64_t HonestProver::query_budget() const { return CommitQueries(scheme_) + 1; }

GrindingProver::GrindingProver(const FiatShamir& scheme, Bytes inst,
                               MessageSource messages, Bytes extra_prefix,
                               uint64_t attempts)
    : scheme_(scheme),
      inst_(std::move(inst)),
      messages_(std::move(messages)),
      extra_prefix_(std::move(extra_prefix)),
      attempts_(attempts) {}

ProverOutput GrindingProver::Run(Oracle& oracle, Rng& rng) const {
  ProverOutput out;
  out.inst = inst_;
  std::vector<Bytes> messages = messages_(rng);
  FiatShamir::Committed committed = scheme_.Commit(oracle, messages);
  std::optional<std::pair<Challenge, Bytes>> last;
  bool hit = false;
  uint64_t used = 0;
  while (used < attempts_ && !hit) {
    Bytes extra = extra_prefix_;
    AppendU64(extra, used++);
    Challenge c =
        scheme_.DeriveChallenge(oracle, inst_, committed.commitment, extra);
    hit = scheme_.protocol().Predicate(inst_, c, Select(committed.messages, c),
                                       extra);
    last.emplace(std::move(c), std::move(extra));
  }
  if (last) {
    out.proof = SerializeProof(scheme_.Open(committed, last->first, last->second));
  }
  AppendU64(out.aux, used);
  AppendU8(out.aux, hit ? 1 : 0);
  return out;
}

uint64_t GrindingProver::query_budget() const {
  return CommitQueries(scheme_) + attempts_;
}

CollidingProver::CollidingProver(const FiatShamir& scheme, Bytes inst,
                                 Bytes witness, uint32_t slot,
                                 CandidateSource candidates, uint64_t attempts)
    : scheme_(scheme),
      inst_(std::move(inst)),
      witness_(std::move(witness)),
      slot_(slot),
      candidates_(std::move(candidates)),
      attempts_(attempts) {}

ProverOutput CollidingProver::Run(Oracle& oracle, Rng& rng) const {
  HonestFirstMessage first = scheme_.protocol().Prepare(inst_, witness_, rng);
  const Bytes honest = first.messages.at(slot_);

  std::unordered_map<Digest, Bytes, DigestHash> seen;
  std::optional<std::pair<Bytes, Bytes>> collision;
  for (uint64_t k = 0; k < attempts_ && !collision; ++k) {
    Bytes candidate = candidates_(honest, rng);
    Digest d = oracle.Query(OracleInput::Msg(candidate));
    auto [it, fresh] = seen.emplace(d, candidate);
    if (!fresh && it->second != candidate) collision.emplace(it->second, candidate);
  }

  std::optional<Bytes> alternative;
  if (collision) {
    // The extractor inverts to the smaller encoding; commit with it and keep
    // the other preimage for the opening.
    auto [a, b] = *collision;
    if (EncodedInputLess()(OracleInput::Msg(b).Encode(), OracleInput::Msg(a).Encode())) {
      std::swap(a, b);
    }
    first.messages[slot_] = a;
    alternative = b;
  }
  FiatShamir::Committed committed = scheme_.Commit(oracle, first.messages);
  Challenge c = scheme_.DeriveChallenge(oracle, inst_, committed.commitment,
                                        first.extra);
  if (alternative) committed.messages[slot_] = *alternative;
  ProverOutput out;
  out.inst = inst_;
  out.proof = SerializeProof(scheme_.Open(committed, c, first.extra));
  AppendU8(out.aux, collision ? 1 : 0);
  return out;
}

uint64_t CollidingProver::query_budget() const {
  return attempts_ + CommitQueries(scheme_) + 1;
}

ProverOutput GarbageProver::Run(Oracle& /*oracle*/, Rng& rng) const {
  ProverOutput out;
  out.inst = inst_;
  out.proof.resize(64);
  for (auto& b : out.proof) b = static_cast<uint8_t>(rng());
  return out;
}

void WriteTrialReport(std::ostream& os, const TrialReport& report) {
  const ExtractionOutcome& o = report.outcome;
  os << report.trial_id << ", " << (o.accepted ? "accept" : "reject") << ", "
     << (o.witness ? 1 : 0) << ", " << (o.suc ? 1 : 0) << ", " << (o.cl ? 1 : 0)
     << ", " << o.db_size << ", " << o.queries_used << '\n';
}

std::vector<TrialReport> RunTrials(const Prover& prover, const FiatShamir& scheme,
                                   size_t digest_bits, uint64_t trials,
                                   uint64_t seed, unsigned threads,
                                   std::optional<Bytes> msg) {
  std::vector<TrialReport> reports(trials);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<uint64_t>(threads, std::max<uint64_t>(trials, 1)));
  std::atomic<uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (uint64_t t = next++; t < trials; t = next++) {
        reports[t] = {t, OnlineExtract(prover, scheme, digest_bits,
                                       TrialSeed(seed, t), msg)};
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = trials;
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return reports;
}

}  // namespace cnofs
