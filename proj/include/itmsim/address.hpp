#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace itmsim {

// IPv4-like 32-bit address. A packet's src field carries one of these with
// no reliability guarantee whatsoever; node identity is a separate concept.
struct Address {
  std::uint32_t value = 0;

  auto operator<=>(const Address&) const = default;
};

struct Subnet {
  std::uint32_t prefix = 0;  // network part, host bits zero
  int length = 32;           // prefix length, 0..32

  std::uint32_t mask() const {
    if (length <= 0) return 0;
    return length >= 32 ? 0xFFFFFFFFu : ~((1u << (32 - length)) - 1u);
  }

  bool contains(Address a) const { return (a.value & mask()) == (prefix & mask()); }

  /// All-ones host part.
  Address broadcast() const { return Address{(prefix & mask()) | ~mask()}; }

  auto operator<=>(const Subnet&) const = default;
};

/// Parses dotted-quad "a.b.c.d". Throws SimError(ParseError) on bad input.
Address parse_address(const std::string& text);

/// Parses "a.b.c.d/len"; host bits are masked off. Throws
/// SimError(ParseError) on bad input.
Subnet parse_subnet(const std::string& text);

std::string format_address(Address a);
std::string format_subnet(const Subnet& s);

}  // namespace itmsim
