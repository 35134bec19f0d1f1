#include "clusterlab/decimal.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <system_error>

#include "clusterlab/errors.hpp"

namespace clusterlab::exact {
namespace {

using boost::multiprecision::cpp_int;

// value = mantissa * 10^exponent
struct Decimal {
  cpp_int mantissa;
  int exponent = 0;
};

cpp_int pow10(int e) {
  cpp_int r = 1;
  for (int i = 0; i < e; ++i) r *= 10;
  return r;
}

Decimal parse_decimal(const std::string& s) {
  Decimal d;
  std::size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
    negative = s[i] == '-';
    ++i;
  }
  int frac_digits = 0;
  bool in_frac = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '.') {
      in_frac = true;
    } else if (c >= '0' && c <= '9') {
      d.mantissa = d.mantissa * 10 + (c - '0');
      if (in_frac) ++frac_digits;
    } else if (c == 'e' || c == 'E') {
      d.exponent = std::stoi(s.substr(i + 1));
      break;
    } else {
      throw RangeError("cannot interpret '" + s + "' as a decimal");
    }
  }
  d.exponent -= frac_digits;
  if (negative) d.mantissa = -d.mantissa;
  return d;
}

Decimal to_decimal(double x) {
  if (!std::isfinite(x)) throw RangeError("non-finite band endpoint");
  return parse_decimal(shortest_decimal(x));
}

Decimal add(Decimal a, Decimal b) {
  const int e = std::min(a.exponent, b.exponent);
  a.mantissa *= pow10(a.exponent - e);
  b.mantissa *= pow10(b.exponent - e);
  return {a.mantissa + b.mantissa, e};
}

// floor or ceil of d^2 as an exact integer.
cpp_int square_rounded(const Decimal& d, bool round_up) {
  cpp_int num = d.mantissa * d.mantissa;
  int e = 2 * d.exponent;
  if (e >= 0) return num * pow10(e);
  const cpp_int den = pow10(-e);
  cpp_int q = num / den;
  if (round_up && q * den != num) q += 1;
  return q;
}

std::int64_t narrow(const cpp_int& v) {
  static const cpp_int kMax = std::numeric_limits<std::int64_t>::max();
  if (v > kMax) throw RangeError("squared band endpoint exceeds the exact integer range");
  return static_cast<std::int64_t>(v);
}

void require_nonnegative(double x) {
  if (!(x >= 0.0)) throw RangeError("band endpoints must be nonnegative");
}

int compare_exact(std::int64_t m, const Decimal& d) {
  // m - M^2 10^{2e}
  cpp_int lhs = m;
  cpp_int rhs = d.mantissa * d.mantissa;
  const int e = 2 * d.exponent;
  if (e >= 0) {
    rhs *= pow10(e);
  } else {
    lhs *= pow10(-e);
  }
  return lhs < rhs ? -1 : (lhs == rhs ? 0 : 1);
}

}  // namespace

std::string shortest_decimal(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  if (res.ec != std::errc{}) throw RangeError("decimal conversion failed");
  return std::string(buf, res.ptr);
}

std::int64_t ceil_square(double x) {
  require_nonnegative(x);
  return narrow(square_rounded(to_decimal(x), true));
}

std::int64_t ceil_square_of_sum(double x, double y) {
  require_nonnegative(x);
  require_nonnegative(y);
  return narrow(square_rounded(add(to_decimal(x), to_decimal(y)), true));
}

std::int64_t floor_square(double x) {
  require_nonnegative(x);
  return narrow(square_rounded(to_decimal(x), false));
}

int compare_with_square(std::int64_t m, double x) {
  require_nonnegative(x);
  return compare_exact(m, to_decimal(x));
}

int compare_with_square_of_sum(std::int64_t m, double x, double y) {
  require_nonnegative(x);
  require_nonnegative(y);
  return compare_exact(m, add(to_decimal(x), to_decimal(y)));
}

}  // namespace clusterlab::exact
