#include "l5/rational.hpp"
#include "l5/wire.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace l5;

TEST(Fnv, PublishedVectors)
{
  EXPECT_EQ(wire::fnv1a64(std::string_view("")), 0xcbf29ce484222325ULL);
  EXPECT_EQ(wire::fnv1a64(std::string_view("a")), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(wire::fnv1a64(std::string_view("foobar")), 0x85944171f73967e8ULL);
}

TEST(Fnv, StreamingEqualsOneShot)
{
  std::mt19937_64 rng(4);
  auto data = wire::synthetic_bytes(17, 5000);
  for (int trial = 0; trial < 50; ++trial) {
    wire::Fnv1a64 h;
    std::size_t off = 0;
    while (off < data.size()) {
      std::size_t n = std::min<std::size_t>(rng() % 700, data.size() - off);
      h.update(std::span(data.data() + off, n));
      off += n;
    }
    EXPECT_EQ(h.digest(), wire::fnv1a64(data));
  }
}

TEST(Writer, BigEndian)
{
  wire::Writer w;
  w.u16(0x0102);
  w.u32(0x03040506);
  w.u64(0x0708090a0b0c0d0eULL);
  w.str("hi");
  std::vector<std::uint8_t> want{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 0, 0, 0, 2, 'h', 'i'};
  EXPECT_EQ(w.buffer(), want);
}

TEST(Writer, DigestSinkMatchesBuffer)
{
  wire::Writer buf;
  wire::Fnv1a64 h;
  wire::Writer sink(h);
  for (auto* w : {&buf, &sink}) {
    w->u8(7);
    w->u64(123456789);
    w->f64(0.25);
    w->str("anchor");
  }
  EXPECT_EQ(h.digest(), wire::fnv1a64(buf.buffer()));
  EXPECT_TRUE(sink.buffer().empty());
}

TEST(Hex, SixteenDigits)
{
  EXPECT_EQ(wire::to_hex(0), "0000000000000000");
  EXPECT_EQ(wire::to_hex(0xcbf29ce484222325ULL), "cbf29ce484222325");
}

TEST(Synthetic, DeterministicAndKeyed)
{
  EXPECT_EQ(wire::synthetic_bytes(1, 100), wire::synthetic_bytes(1, 100));
  EXPECT_NE(wire::synthetic_bytes(1, 100), wire::synthetic_bytes(2, 100));
  auto longer = wire::synthetic_bytes(1, 200);
  auto shorter = wire::synthetic_bytes(1, 100);
  EXPECT_TRUE(std::equal(shorter.begin(), shorter.end(), longer.begin()));
  EXPECT_TRUE(wire::synthetic_bytes(5, 0).empty());
}

TEST(Rational, DecimalSpelling)
{
  EXPECT_EQ(rational_from_decimal(0.1), Rational(1, 10));
  EXPECT_EQ(rational_from_decimal(0.5), Rational(1, 2));
  EXPECT_EQ(rational_from_decimal(100), Rational(100));
  EXPECT_EQ(rational_from_decimal(1e-6), Rational(1, 1000000));
  EXPECT_EQ(rational_from_decimal(0.001), Rational(1, 1000));
}

TEST(Rational, Ceil)
{
  EXPECT_EQ(ceil_to_u64(Rational(7, 2)), 4u);
  EXPECT_EQ(ceil_to_u64(Rational(4)), 4u);
  EXPECT_EQ(ceil_to_u64(Rational(0)), 0u);
  EXPECT_EQ(ceil_to_u64(Rational(65536, 50)), 1311u);
  EXPECT_DOUBLE_EQ(to_double(Rational(1, 3)), 1.0 / 3.0);
}
