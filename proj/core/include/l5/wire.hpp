#pragma once

// Big-endian canonical encodings and the 64-bit digest used for determinism
// hashes and content hashes.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace l5::wire {

/// FNV-1a, 64-bit. Streaming: feeding bytes in pieces equals feeding them at once.
class Fnv1a64 {
 public:
  static constexpr std::uint64_t offset_basis = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t prime = 0x100000001b3ULL;

  void update(std::span<const std::uint8_t> bytes) noexcept
  {
    for (auto b : bytes) {
      m_state ^= b;
      m_state *= prime;
    }
  }

  void update_byte(std::uint8_t b) noexcept
  {
    m_state ^= b;
    m_state *= prime;
  }

  std::uint64_t digest() const noexcept { return m_state; }

 private:
  std::uint64_t m_state = offset_basis;
};

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) noexcept;
std::uint64_t fnv1a64(std::string_view text) noexcept;

std::string to_hex(std::uint64_t value);

/// Appends big-endian integers and u32-length-prefixed strings. Writes either
/// into an owned buffer or straight into a digest.
class Writer {
 public:
  Writer() = default;
  explicit Writer(Fnv1a64& sink) : m_sink(&sink) {}

  void u8(std::uint8_t v) { put(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f64(double v);
  void str(std::string_view s);
  void bytes(std::span<const std::uint8_t> b);

  const std::vector<std::uint8_t>& buffer() const noexcept { return m_buffer; }
  std::vector<std::uint8_t> take() && { return std::move(m_buffer); }

 private:
  void put(std::uint8_t b)
  {
    if (m_sink)
      m_sink->update_byte(b);
    else
      m_buffer.push_back(b);
  }

  std::vector<std::uint8_t> m_buffer;
  Fnv1a64* m_sink = nullptr;
};

/// Deterministic synthetic content: the same (key, size) always yields the
/// same bytes. Used for session payloads and staged objects.
std::vector<std::uint8_t> synthetic_bytes(std::uint64_t key, std::size_t size);

}  // namespace l5::wire
