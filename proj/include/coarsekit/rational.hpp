#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace coarsekit {

using Rational = boost::rational<std::int64_t>;

/// Renders as "p/q" (always with a denominator, even when q == 1).
std::string to_string(const Rational& value);

/// Accepts "p/q" or a bare integer "p". Throws Error(InvalidInput).
Rational parse_rational(std::string_view text);

}  // namespace coarsekit
