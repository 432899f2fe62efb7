#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "cnofs/fs.h"
#include "cnofs/oracle.h"

namespace cnofs {

struct ProverOutput {
  Bytes inst;
  Bytes proof;
  // Auxiliary output Z. The extractor ignores it; adversaries use it to
  // report what they attempted.
  Bytes aux;
};

// An oracle algorithm that outputs an instance and a serialized proof. It
// must reach the random oracle only through the handle it is given.
class Prover {
 public:
  virtual ~Prover() = default;

  virtual ProverOutput Run(Oracle& oracle, Rng& rng) const = 0;
  // Queries the harness grants; exceeding it is ProverMisbehaved.
  virtual uint64_t query_budget() const = 0;
};

struct ExtractionOutcome {
  bool accepted = false;
  std::optional<Bytes> witness;
  bool suc = false;
  bool cl = false;
  size_t db_size = 0;
  uint64_t queries_used = 0;
  Bytes aux;
};

// Diagnostics derived from a finished run's database.
struct SucOptions {
  // Only challenge records for this instance are considered; all if empty.
  std::optional<Bytes> inst;
};

// True iff some CHAL record in `db` yields a challenge that the inverted
// commitment answers while E* fails on it.
bool SucCheck(const Database& db, const FiatShamir& scheme, size_t digest_bits,
              const SucOptions& options = {});

// One run of the online extractor: the prover against a fresh recording
// oracle, the verifier on the same oracle, then E* on D^{-1}(y) (or
// MRoot_D^{-1}(y)). `msg` switches to the signature variant.
ExtractionOutcome OnlineExtract(const Prover& prover, const FiatShamir& scheme,
                                size_t digest_bits, uint64_t seed,
                                std::optional<Bytes> msg = std::nullopt,
                                Database* final_db = nullptr);

// An honest prover for a fixed (inst, witness).
class HonestProver : public Prover {
 public:
  HonestProver(const FiatShamir& scheme, Bytes inst, Bytes witness,
               std::optional<Bytes> msg = std::nullopt);

  ProverOutput Run(Oracle& oracle, Rng& rng) const override;
  uint64_t query_budget() const override;

 private:
  const FiatShamir& scheme_;
  Bytes inst_;
  Bytes witness_;
  std::optional<Bytes> msg_;
};

// Commits to fixed messages that only answer a set S-hat outside S, then
// re-derives the challenge up to `attempts` times by varying a nonce appended
// to a0, and outputs the first answerable proof (or the last attempt).
// aux = attempts used (u64) followed by 1 if an answerable challenge was hit.
class GrindingProver : public Prover {
 public:
  using MessageSource = std::function<std::vector<Bytes>(Rng&)>;

  GrindingProver(const FiatShamir& scheme, Bytes inst, MessageSource messages,
                 Bytes extra_prefix, uint64_t attempts);

  ProverOutput Run(Oracle& oracle, Rng& rng) const override;
  uint64_t query_budget() const override;

 private:
  const FiatShamir& scheme_;
  Bytes inst_;
  MessageSource messages_;
  Bytes extra_prefix_;
  uint64_t attempts_;
};

// Runs the honest prover's first round, then spends `attempts` MSG queries on
// candidates for one slot hunting for H(m) = H(m'), m != m'. On success it
// commits the shared digest and opens whichever preimage the extractor would
// not pick. aux = 1 if a collision was found, 0 otherwise.
class CollidingProver : public Prover {
 public:
  using CandidateSource = std::function<Bytes(const Bytes& honest, Rng&)>;

  CollidingProver(const FiatShamir& scheme, Bytes inst, Bytes witness,
                  uint32_t slot, CandidateSource candidates, uint64_t attempts);

  ProverOutput Run(Oracle& oracle, Rng& rng) const override;
  uint64_t query_budget() const override;

 private:
  const FiatShamir& scheme_;
  Bytes inst_;
  Bytes witness_;
  uint32_t slot_;
  CandidateSource candidates_;
  uint64_t attempts_;
};

// Emits unparseable bytes.
class GarbageProver : public Prover {
 public:
  explicit GarbageProver(Bytes inst) : inst_(std::move(inst)) {}

  ProverOutput Run(Oracle& oracle, Rng& rng) const override;
  uint64_t query_budget() const override { return 0; }

 private:
  Bytes inst_;
};

struct TrialReport {
  uint64_t trial_id = 0;
  ExtractionOutcome outcome;
};

// `trial_id, v, extracted, suc, cl, db_size, q_used`
void WriteTrialReport(std::ostream& os, const TrialReport& report);

// Per-trial seeds are derived from (seed, trial_id), so results do not depend
// on the thread count.
std::vector<TrialReport> RunTrials(const Prover& prover, const FiatShamir& scheme,
                                   size_t digest_bits, uint64_t trials,
                                   uint64_t seed, unsigned threads = 0,
                                   std::optional<Bytes> msg = std::nullopt);

uint64_t TrialSeed(uint64_t seed, uint64_t trial_id);

}  // namespace cnofs
