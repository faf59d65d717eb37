#include "mtn/rational.hpp"

#include <charconv>
#include <limits>

namespace mtn {

namespace {

bool parse_int(std::string_view text, std::int64_t& out) {
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (*begin == '+') return false;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

std::string to_string(const RationalTime& value, bool always_fraction) {
  std::string out = std::to_string(value.numerator());
  if (value.denominator() != 1 || always_fraction) {
    out += '/';
    out += std::to_string(value.denominator());
  }
  return out;
}

std::string to_string(const Exact& value) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  std::string out = numerator(value).str();
  if (denominator(value) != 1) {
    out += '/';
    out += denominator(value).str();
  }
  return out;
}

bool parse_rational(std::string_view text, RationalTime& out) {
  auto slash = text.find('/');
  std::int64_t num = 0;
  std::int64_t den = 1;
  if (slash == std::string_view::npos) {
    if (!parse_int(text, num)) return false;
  } else {
    if (!parse_int(text.substr(0, slash), num)) return false;
    auto den_text = text.substr(slash + 1);
    if (den_text.empty() || den_text.front() == '-') return false;
    if (!parse_int(den_text, den) || den == 0) return false;
  }
  out = RationalTime(num, den);
  return true;
}

bool parse_exact(std::string_view text, Exact& out) {
  auto valid_digits = [](std::string_view s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && s[0] == '-') i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
  };
  auto slash = text.find('/');
  using boost::multiprecision::cpp_int;
  if (slash == std::string_view::npos) {
    if (!valid_digits(text, true)) return false;
    out = Exact(cpp_int(std::string(text)));
    return true;
  }
  auto num_text = text.substr(0, slash);
  auto den_text = text.substr(slash + 1);
  if (!valid_digits(num_text, true) || !valid_digits(den_text, false)) return false;
  cpp_int den(std::string{den_text});
  if (den == 0) return false;
  out = Exact(cpp_int(std::string(num_text)), den);
  return true;
}

Exact to_exact(const RationalTime& value) {
  return Exact(value.numerator(), value.denominator());
}

std::string to_decimal(const Exact& value, int digits) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  cpp_int scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  cpp_int num = numerator(value);
  const cpp_int den = denominator(value);
  const bool negative = num < 0;
  if (negative) num = -num;
  // round half away from zero
  cpp_int scaled = (num * scale * 2 + den) / (den * 2);
  cpp_int whole = scaled / scale;
  cpp_int frac = scaled % scale;
  std::string out = (negative && scaled != 0) ? "-" : "";
  out += whole.str();
  if (digits > 0) {
    std::string frac_text = frac.str();
    out += '.';
    out += std::string(static_cast<std::size_t>(digits) - frac_text.size(), '0');
    out += frac_text;
  }
  return out;
}

double to_double(const Exact& value) {
  return value.convert_to<double>();
}

}  // namespace mtn
