#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cnofs {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

// Base of every error raised by the library. Subclasses name the failure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputTooLong : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ChallengeSpaceTooLarge : public Error {
 public:
  using Error::Error;
};

class InvalidChallenge : public Error {
 public:
  using Error::Error;
};

std::string ToHex(ByteView data);
Bytes FromHex(std::string_view hex);

inline Bytes ToBytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

void AppendU8(Bytes& out, uint8_t v);
void AppendU16(Bytes& out, uint16_t v);
void AppendU32(Bytes& out, uint32_t v);
void AppendU64(Bytes& out, uint64_t v);
void Append(Bytes& out, ByteView data);
// 4-byte big-endian length followed by the data.
void AppendLengthPrefixed(Bytes& out, ByteView data);

// Sequential big-endian reader. Every accessor throws ParseError on underrun.
class ByteReader {
 public:
  explicit ByteReader(ByteView data) : data_(data) {}

  uint8_t ReadU8();
  uint16_t ReadU16();
  uint32_t ReadU32();
  uint64_t ReadU64();
  ByteView ReadBytes(size_t n);
  ByteView ReadLengthPrefixed();
  ByteView ReadRest();

  size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }

 private:
  ByteView data_;
  size_t pos_ = 0;
};

}  // namespace cnofs
