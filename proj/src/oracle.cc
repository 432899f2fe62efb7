#include "cnofs/oracle.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cstring>
#include <memory>

namespace cnofs {

size_t DigestHash::operator()(const Digest& d) const noexcept {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (uint8_t b : d.bytes()) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return static_cast<size_t>(h);
}

Bytes OracleInput::Encode() const {
  Bytes out;
  out.reserve(payload.size() + 1);
  out.push_back(static_cast<uint8_t>(tag));
  Append(out, payload);
  return out;
}

OracleInput OracleInput::Decode(ByteView encoded) {
  if (encoded.empty()) throw ParseError("empty oracle input");
  uint8_t tag = encoded[0];
  if (tag > static_cast<uint8_t>(Tag::kChal)) {
    throw ParseError("unknown oracle input tag");
  }
  return OracleInput{static_cast<Tag>(tag),
                     Bytes(encoded.begin() + 1, encoded.end())};
}

OracleInput OracleInput::Msg(ByteView message) {
  return OracleInput{Tag::kMsg, Bytes(message.begin(), message.end())};
}

OracleInput OracleInput::Node(const Digest& left, const Digest& right) {
  OracleInput x{Tag::kNode, {}};
  x.payload.reserve(left.size() + right.size());
  Append(x.payload, left.bytes());
  Append(x.payload, right.bytes());
  return x;
}

OracleInput OracleInput::Chal(ByteView data) {
  return OracleInput{Tag::kChal, Bytes(data.begin(), data.end())};
}

bool EncodedInputLess::operator()(const Bytes& a, const Bytes& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::memcmp(a.data(), b.data(), a.size()) < 0;
}

const Digest* Database::Find(const Bytes& encoded) const {
  auto it = entries_.find(encoded);
  return it == entries_.end() ? nullptr : &it->second;
}

void Database::Insert(Bytes encoded, Digest digest) {
  auto& bucket = preimages_[digest];
  bucket.insert(encoded);
  if (bucket.size() == 2) ++collision_buckets_;
  entries_.emplace(std::move(encoded), std::move(digest));
}

void Database::Erase(const Bytes& encoded) {
  auto it = entries_.find(encoded);
  if (it == entries_.end()) return;
  auto bucket = preimages_.find(it->second);
  bucket->second.erase(encoded);
  if (bucket->second.size() == 1) --collision_buckets_;
  if (bucket->second.empty()) preimages_.erase(bucket);
  entries_.erase(it);
}

std::optional<Bytes> Database::Inverse(const Digest& y) const {
  auto it = preimages_.find(y);
  if (it == preimages_.end() || it->second.empty()) return std::nullopt;
  return *it->second.begin();
}

void Database::Dump(std::ostream& os) const {
  for (const auto& [input, digest] : entries_) {
    os << ToHex(input) << ' ' << ToHex(digest.bytes()) << '\n';
  }
}

Digest ConcreteHash(ByteView encoded, size_t bits) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
      EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  Bytes out(bits / 8);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_shake256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), encoded.data(), encoded.size()) != 1 ||
      EVP_DigestFinalXOF(ctx.get(), out.data(), out.size()) != 1) {
    throw Error("SHAKE256 evaluation failed");
  }
  return Digest(std::move(out));
}

Oracle::Oracle(size_t digest_bits, size_t max_input_bytes)
    : digest_bits_(digest_bits), max_input_bytes_(max_input_bytes) {
  if (digest_bits == 0 || digest_bits % 8 != 0) {
    throw Error("digest length must be a positive multiple of 8 bits");
  }
}

Digest Oracle::Query(const OracleInput& x) {
  if (x.payload.size() + 1 > max_input_bytes_) {
    throw InputTooLong("oracle input of " + std::to_string(x.payload.size() + 1) +
                       " bytes exceeds bound of " +
                       std::to_string(max_input_bytes_));
  }
  queries_.fetch_add(1, std::memory_order_relaxed);
  return DoQuery(x, x.Encode());
}

Digest ConcreteOracle::DoQuery(const OracleInput&, Bytes encoded) {
  return ConcreteHash(encoded, digest_bits());
}

RecordingOracle::RecordingOracle(size_t digest_bits, uint64_t seed,
                                 size_t max_input_bytes)
    : Oracle(digest_bits, max_input_bytes), rng_(seed) {
  sampler_ = [this](const Bytes&) {
    Bytes out(digest_bytes());
    for (size_t i = 0; i < out.size(); i += 8) {
      uint64_t word = rng_();
      size_t take = std::min<size_t>(8, out.size() - i);
      std::memcpy(out.data() + i, &word, take);
    }
    return Digest(std::move(out));
  };
}

RecordingOracle::RecordingOracle(size_t digest_bits, Sampler sampler,
                                 size_t max_input_bytes)
    : Oracle(digest_bits, max_input_bytes), sampler_(std::move(sampler)) {}

Digest RecordingOracle::DoQuery(const OracleInput&, Bytes encoded) {
  db_.CountQuery();
  if (const Digest* hit = db_.Find(encoded)) return *hit;
  Digest fresh = sampler_(encoded);
  db_.Insert(std::move(encoded), fresh);
  return fresh;
}

BudgetedOracle::BudgetedOracle(Oracle& inner, uint64_t budget)
    : Oracle(inner.digest_bits(), inner.max_input_bytes()),
      inner_(inner),
      budget_(budget) {}

Digest BudgetedOracle::DoQuery(const OracleInput& x, Bytes) {
  if (used_ >= budget_) {
    throw ProverMisbehaved("prover exceeded its declared query budget of " +
                           std::to_string(budget_));
  }
  ++used_;
  return inner_.Query(x);
}

}  // namespace cnofs
