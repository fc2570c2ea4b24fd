#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "milnor/mixed_polynomial.hpp"

namespace milnor {

/// Parses the text form
///
///   poly    := ['-'] term (('+'|'-') term)*
///   term    := factor ('*' factor)*
///   factor  := literal | var ('^' uint)?
///   var     := 'z' uint | 'zb' uint          (1-based indices)
///   literal := real | '(' real ')' | '(' real 'i' ')' | '(' real ('+'|'-') real 'i' ')'
///
/// Reals inside parentheses may carry a sign. Whitespace is ignored. The
/// number of variables is the largest index used unless `num_vars` is given.
/// Throws ParseError (with a byte offset) or InputError.
MixedPolynomial parse_mixed_expression(std::string_view text,
                                       std::optional<int> num_vars = std::nullopt);

/// Canonical text form; parse_mixed_expression(to_expression(f), f.num_vars()) == f.
std::string to_expression(const MixedPolynomial& f);

}  // namespace milnor
