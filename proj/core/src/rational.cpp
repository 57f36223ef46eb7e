#include "l5/rational.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace l5 {

namespace mp = boost::multiprecision;

Rational
rational_from_decimal(double value)
{
  if (!std::isfinite(value))
    throw std::invalid_argument("non-finite value has no rational form");

  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::scientific);
  if (ec != std::errc())
    throw std::invalid_argument("cannot format value");
  std::string text(buf.data(), end);

  // text looks like "-1.2345e+02"
  bool negative = false;
  std::size_t pos = 0;
  if (text[pos] == '-') {
    negative = true;
    ++pos;
  }
  auto epos = text.find('e');
  std::string mantissa = text.substr(pos, epos - pos);
  int exponent = std::stoi(text.substr(epos + 1));

  std::string digits;
  int fraction_digits = 0;
  bool after_point = false;
  for (char c : mantissa) {
    if (c == '.') {
      after_point = true;
      continue;
    }
    digits.push_back(c);
    if (after_point)
      ++fraction_digits;
  }

  mp::cpp_int numerator(digits);
  int scale = exponent - fraction_digits;
  mp::cpp_int ten_power = mp::pow(mp::cpp_int(10), static_cast<unsigned>(std::abs(scale)));
  Rational r = scale >= 0 ? Rational(numerator * ten_power) : Rational(numerator, ten_power);
  return negative ? Rational(-r) : r;
}

double
to_double(const Rational& value)
{
  return value.convert_to<double>();
}

std::uint64_t
ceil_to_u64(const Rational& value)
{
  mp::cpp_int num = mp::numerator(value);
  mp::cpp_int den = mp::denominator(value);
  if (num < 0)
    throw std::invalid_argument("ceil_to_u64 of negative value");
  mp::cpp_int q = num / den;
  if (q * den != num)
    q += 1;
  return q.convert_to<std::uint64_t>();
}

}  // namespace l5
