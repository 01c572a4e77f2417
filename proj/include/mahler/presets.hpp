#pragma once

#include <optional>
#include <string_view>

#include "mahler/laurent.hpp"

namespace mahler {

/// g(z) = (z^2 + a1 z + a2) g(z^3), B = 1.
MahlerSystem quadratic_system(const Integer& a1, const Integer& a2, std::optional<Integer> b = Integer(2));

/// a = (s, s^2).
MahlerSystem family_a(long s, std::optional<Integer> b = Integer(2));
/// a = (s^3, -s^2 (s^2 + 1)).
MahlerSystem family_b(long s, std::optional<Integer> b = Integer(2));
/// a = (2 sign, 1).
MahlerSystem family_c(int sign, std::optional<Integer> b = Integer(2));

/// Parses "family_a:2", "family_b:1", "family_c:+" and the same with
/// parentheses, "family_a(2)". Throws ParseError.
MahlerSystem preset(std::string_view name, std::optional<Integer> b = Integer(2));

}  // namespace mahler
