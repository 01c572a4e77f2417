#include "mahler/presets.hpp"

#include <charconv>
#include <string>

#include "mahler/errors.hpp"

namespace mahler {

MahlerSystem quadratic_system(const Integer& a1, const Integer& a2, std::optional<Integer> b) {
  Poly A(std::vector<Rat>{Rat(a2), Rat(a1), Rat(1)});
  return MahlerSystem(std::move(A), Poly{1}, 3, std::move(b));
}

MahlerSystem family_a(long s, std::optional<Integer> b) {
  const Integer S(s);
  return quadratic_system(S, S * S, std::move(b));
}

MahlerSystem family_b(long s, std::optional<Integer> b) {
  const Integer S(s);
  const Integer s2 = S * S;
  return quadratic_system(s2 * S, -s2 * (s2 + 1), std::move(b));
}

MahlerSystem family_c(int sign, std::optional<Integer> b) {
  if (sign != 1 && sign != -1) throw ParseError("family_c takes sign + or -");
  return quadratic_system(Integer(2 * sign), Integer(1), std::move(b));
}

MahlerSystem preset(std::string_view name, std::optional<Integer> b) {
  // family_a:2 or family_a(2).
  std::string_view family;
  std::string_view arg;
  if (const auto colon = name.find(':'); colon != std::string_view::npos) {
    family = name.substr(0, colon);
    arg = name.substr(colon + 1);
  } else if (const auto open = name.find('('); open != std::string_view::npos && name.back() == ')') {
    family = name.substr(0, open);
    arg = name.substr(open + 1, name.size() - open - 2);
  } else {
    throw ParseError("preset needs a parameter, e.g. family_a:2 or family_a(2): '" + std::string(name) + "'");
  }
  if (family == "family_c") {
    if (arg == "+" || arg == "+1" || arg == "1") return family_c(1, std::move(b));
    if (arg == "-" || arg == "-1") return family_c(-1, std::move(b));
    throw ParseError("family_c parameter must be + or -, got '" + std::string(arg) + "'");
  }
  long s = 0;
  const char* first = arg.data();
  const char* last = arg.data() + arg.size();
  if (!arg.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, s);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ParseError("preset parameter must be an integer, got '" + std::string(arg) + "'");
  }
  if (family == "family_a") return family_a(s, std::move(b));
  if (family == "family_b") return family_b(s, std::move(b));
  throw ParseError("unknown preset family '" + std::string(family) + "'");
}

}  // namespace mahler
