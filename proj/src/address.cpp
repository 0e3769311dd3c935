#include "itmsim/address.hpp"

#include <cstdio>

#include "itmsim/errors.hpp"

namespace itmsim {

Address parse_address(const std::string& text) {
  unsigned a = 0, b = 0, c = 0, d = 0;
  char tail = 0;
  const int got = std::sscanf(text.c_str(), "%u.%u.%u.%u%c", &a, &b, &c, &d, &tail);
  if (got != 4 || a > 255 || b > 255 || c > 255 || d > 255)
    throw SimError(Errc::ParseError, "bad address '" + text + "'");
  return Address{(a << 24) | (b << 16) | (c << 8) | d};
}

Subnet parse_subnet(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos)
    throw SimError(Errc::ParseError, "bad subnet '" + text + "': expected prefix/length");
  Subnet s;
  s.prefix = parse_address(text.substr(0, slash)).value;
  const std::string len = text.substr(slash + 1);
  char tail = 0;
  int v = -1;
  if (std::sscanf(len.c_str(), "%d%c", &v, &tail) != 1 || v < 0 || v > 32)
    throw SimError(Errc::ParseError, "bad subnet '" + text + "': length must be 0..32");
  s.length = v;
  s.prefix &= s.mask();
  return s;
}

std::string format_address(Address a) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", (a.value >> 24) & 0xFF, (a.value >> 16) & 0xFF,
                (a.value >> 8) & 0xFF, a.value & 0xFF);
  return buf;
}

std::string format_subnet(const Subnet& s) {
  return format_address(Address{s.prefix & s.mask()}) + "/" + std::to_string(s.length);
}

}  // namespace itmsim
