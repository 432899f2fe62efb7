#include "cnofs/bytes.h"

namespace cnofs {

namespace {

int HexValue(char ch) {
  if (ch >= '0' && ch <= '9') return ch - '0';
  if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
  if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
  return -1;
}

}  // namespace

std::string ToHex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

Bytes FromHex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw ParseError("odd-length hex string");
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    int hi = HexValue(hex[2 * i]);
    int lo = HexValue(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw ParseError("invalid hex digit");
    out[i] = static_cast<uint8_t>(hi << 4 | lo);
  }
  return out;
}

void AppendU8(Bytes& out, uint8_t v) { out.push_back(v); }

void AppendU16(Bytes& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

void AppendU32(Bytes& out, uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<uint8_t>(v >> shift));
  }
}

void AppendU64(Bytes& out, uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<uint8_t>(v >> shift));
  }
}

void Append(Bytes& out, ByteView data) {
  out.insert(out.end(), data.begin(), data.end());
}

void AppendLengthPrefixed(Bytes& out, ByteView data) {
  if (data.size() > UINT32_MAX) throw InputTooLong("length prefix overflow");
  AppendU32(out, static_cast<uint32_t>(data.size()));
  Append(out, data);
}

uint8_t ByteReader::ReadU8() { return ReadBytes(1)[0]; }

uint16_t ByteReader::ReadU16() {
  ByteView b = ReadBytes(2);
  return static_cast<uint16_t>(b[0] << 8 | b[1]);
}

uint32_t ByteReader::ReadU32() {
  ByteView b = ReadBytes(4);
  uint32_t v = 0;
  for (uint8_t x : b) v = v << 8 | x;
  return v;
}

uint64_t ByteReader::ReadU64() {
  ByteView b = ReadBytes(8);
  uint64_t v = 0;
  for (uint8_t x : b) v = v << 8 | x;
  return v;
}

ByteView ByteReader::ReadBytes(size_t n) {
  if (n > remaining()) throw ParseError("unexpected end of input");
  ByteView out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

ByteView ByteReader::ReadLengthPrefixed() { return ReadBytes(ReadU32()); }

ByteView ByteReader::ReadRest() { return ReadBytes(remaining()); }

}  // namespace cnofs
