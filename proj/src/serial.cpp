#include "rdnsgeo/serial.hpp"

#include <bit>
#include <limits>

namespace rdnsgeo {

namespace {

constexpr std::size_t kMaxStringBytes = 1u << 28;

}  // namespace

void BinaryWriter::u8(std::uint8_t v) {
  out_.put(static_cast<char>(v));
}

void BinaryWriter::u16(std::uint16_t v) {
  for (int i = 0; i < 2; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void BinaryWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void BinaryWriter::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void BinaryWriter::i64(std::int64_t v) {
  u64(static_cast<std::uint64_t>(v));
}

void BinaryWriter::f64(double v) {
  u64(std::bit_cast<std::uint64_t>(v));
}

void BinaryWriter::str(std::string_view v) {
  if (v.size() > kMaxStringBytes) throw SerialError("string too long to serialize");
  u32(static_cast<std::uint32_t>(v.size()));
  out_.write(v.data(), static_cast<std::streamsize>(v.size()));
}

std::uint8_t BinaryReader::u8() {
  int c = in_.get();
  if (c == std::istream::traits_type::eof()) throw SerialError("unexpected end of file");
  return static_cast<std::uint8_t>(c);
}

std::uint16_t BinaryReader::u16() {
  std::uint16_t v = 0;
  for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(u8()) << (8 * i);
  return v;
}

std::uint32_t BinaryReader::u32() {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
  return v;
}

std::uint64_t BinaryReader::u64() {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
  return v;
}

std::int64_t BinaryReader::i64() {
  return static_cast<std::int64_t>(u64());
}

double BinaryReader::f64() {
  return std::bit_cast<double>(u64());
}

std::string BinaryReader::str() {
  std::uint32_t n = u32();
  if (n > kMaxStringBytes) throw SerialError("string length out of range");
  std::string s(n, '\0');
  in_.read(s.data(), static_cast<std::streamsize>(n));
  if (in_.gcount() != static_cast<std::streamsize>(n)) {
    throw SerialError("unexpected end of file");
  }
  return s;
}

}  // namespace rdnsgeo
