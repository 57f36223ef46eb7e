#include "l5/wire.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

namespace l5::wire {

std::uint64_t
fnv1a64(std::span<const std::uint8_t> bytes) noexcept
{
  Fnv1a64 h;
  h.update(bytes);
  return h.digest();
}

std::uint64_t
fnv1a64(std::string_view text) noexcept
{
  return fnv1a64(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string
to_hex(std::uint64_t value)
{
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

void
Writer::u16(std::uint16_t v)
{
  put(static_cast<std::uint8_t>(v >> 8));
  put(static_cast<std::uint8_t>(v));
}

void
Writer::u32(std::uint32_t v)
{
  for (int shift = 24; shift >= 0; shift -= 8)
    put(static_cast<std::uint8_t>(v >> shift));
}

void
Writer::u64(std::uint64_t v)
{
  for (int shift = 56; shift >= 0; shift -= 8)
    put(static_cast<std::uint8_t>(v >> shift));
}

void
Writer::f64(double v)
{
  u64(std::bit_cast<std::uint64_t>(v));
}

void
Writer::str(std::string_view s)
{
  if (s.size() > UINT32_MAX)
    throw std::length_error("string too long for u32 prefix");
  u32(static_cast<std::uint32_t>(s.size()));
  for (char c : s)
    put(static_cast<std::uint8_t>(c));
}

void
Writer::bytes(std::span<const std::uint8_t> b)
{
  u32(static_cast<std::uint32_t>(b.size()));
  if (m_sink) {
    m_sink->update(b);
  }
  else {
    m_buffer.insert(m_buffer.end(), b.begin(), b.end());
  }
}

std::vector<std::uint8_t>
synthetic_bytes(std::uint64_t key, std::size_t size)
{
  // splitmix64 stream
  std::vector<std::uint8_t> out(size);
  std::uint64_t state = key;
  std::size_t i = 0;
  while (i < size) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    for (int b = 0; b < 8 && i < size; ++b, ++i)
      out[i] = static_cast<std::uint8_t>(z >> (8 * b));
  }
  return out;
}

}  // namespace l5::wire
