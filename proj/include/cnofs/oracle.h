#pragma once

#include <atomic>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <unordered_map>

#include "cnofs/bytes.h"

namespace cnofs {

using Rng = std::mt19937_64;

// Domain-separation tag, prepended to every oracle input.
enum class Tag : uint8_t {
  kMsg = 0x00,   // committed message
  kNode = 0x01,  // two concatenated child digests
  kChal = 0x02,  // challenge derivation input
};

inline constexpr size_t kDefaultMaxInputBytes = size_t{1} << 20;

// n-bit oracle output; n is always a multiple of 8.
class Digest {
 public:
  Digest() = default;
  explicit Digest(Bytes bytes) : bytes_(std::move(bytes)) {}

  size_t bits() const { return bytes_.size() * 8; }
  size_t size() const { return bytes_.size(); }
  ByteView bytes() const { return bytes_; }
  Bytes& mutable_bytes() { return bytes_; }

  friend bool operator==(const Digest&, const Digest&) = default;
  friend auto operator<=>(const Digest&, const Digest&) = default;

 private:
  Bytes bytes_;
};

struct DigestHash {
  size_t operator()(const Digest& d) const noexcept;
};

struct OracleInput {
  Tag tag = Tag::kMsg;
  Bytes payload;

  // tag byte || payload
  Bytes Encode() const;
  static OracleInput Decode(ByteView encoded);

  static OracleInput Msg(ByteView message);
  static OracleInput Node(const Digest& left, const Digest& right);
  static OracleInput Chal(ByteView data);
};

// Length first, then lexicographic. This is the order under which
// Database::Inverse returns the smallest preimage.
struct EncodedInputLess {
  bool operator()(const Bytes& a, const Bytes& b) const;
};

// The lazy-sampling record of a simulated random oracle.
class Database {
 public:
  using EntryMap = std::map<Bytes, Digest, EncodedInputLess>;

  const Digest* Find(const Bytes& encoded) const;
  // Precondition: `encoded` is not yet present.
  void Insert(Bytes encoded, Digest digest);
  // Removes an entry if present. Used to build damaged databases in tests.
  void Erase(const Bytes& encoded);

  // Smallest recorded input mapping to `y`, if any.
  std::optional<Bytes> Inverse(const Digest& y) const;
  bool HasCollision() const { return collision_buckets_ > 0; }

  size_t size() const { return entries_.size(); }
  uint64_t query_count() const { return query_count_; }
  void CountQuery() { ++query_count_; }
  const EntryMap& entries() const { return entries_; }

  // One line per entry: hex(encoded input) SP hex(digest), in input order.
  void Dump(std::ostream& os) const;

 private:
  EntryMap entries_;
  std::unordered_map<Digest, std::set<Bytes, EncodedInputLess>, DigestHash>
      preimages_;
  size_t collision_buckets_ = 0;
  uint64_t query_count_ = 0;
};

// SHAKE256 of `encoded`, truncated to `bits`.
Digest ConcreteHash(ByteView encoded, size_t bits);

// H : {0,1}^{<=B} -> {0,1}^n.
class Oracle {
 public:
  Oracle(size_t digest_bits, size_t max_input_bytes);
  virtual ~Oracle() = default;

  Oracle(const Oracle&) = delete;
  Oracle& operator=(const Oracle&) = delete;

  // Throws InputTooLong if the encoded input exceeds max_input_bytes().
  Digest Query(const OracleInput& x);

  size_t digest_bits() const { return digest_bits_; }
  size_t digest_bytes() const { return digest_bits_ / 8; }
  size_t max_input_bytes() const { return max_input_bytes_; }
  uint64_t queries() const { return queries_.load(std::memory_order_relaxed); }

 protected:
  virtual Digest DoQuery(const OracleInput& x, Bytes encoded) = 0;

 private:
  size_t digest_bits_;
  size_t max_input_bytes_;
  std::atomic<uint64_t> queries_{0};
};

// Production mode: a stateless concrete hash.
class ConcreteOracle : public Oracle {
 public:
  explicit ConcreteOracle(size_t digest_bits,
                          size_t max_input_bytes = kDefaultMaxInputBytes)
      : Oracle(digest_bits, max_input_bytes) {}

 protected:
  Digest DoQuery(const OracleInput& x, Bytes encoded) override;
};

// Recording mode: lazily samples fresh outputs and keeps the database.
class RecordingOracle : public Oracle {
 public:
  using Sampler = std::function<Digest(const Bytes& encoded)>;

  // Fresh outputs drawn uniformly from a generator seeded with `seed`.
  RecordingOracle(size_t digest_bits, uint64_t seed,
                  size_t max_input_bytes = kDefaultMaxInputBytes);
  // Fresh outputs supplied by `sampler`, e.g. a fixed function to replay.
  RecordingOracle(size_t digest_bits, Sampler sampler,
                  size_t max_input_bytes = kDefaultMaxInputBytes);

  const Database& database() const { return db_; }
  Database& mutable_database() { return db_; }

 protected:
  Digest DoQuery(const OracleInput& x, Bytes encoded) override;

 private:
  Database db_;
  Sampler sampler_;
  Rng rng_;
};

// Forwards to another oracle and enforces a query budget.
class BudgetedOracle : public Oracle {
 public:
  BudgetedOracle(Oracle& inner, uint64_t budget);

  uint64_t used() const { return used_; }

 protected:
  Digest DoQuery(const OracleInput& x, Bytes encoded) override;

 private:
  Oracle& inner_;
  uint64_t budget_;
  uint64_t used_ = 0;
};

class ProverMisbehaved : public Error {
 public:
  using Error::Error;
};

}  // namespace cnofs
