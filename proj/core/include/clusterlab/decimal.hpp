#pragma once

#include <cstdint>
#include <string>

namespace clusterlab::exact {

// Band endpoints arrive as doubles but are meant as the decimals the user
// typed. Each double is read back as its shortest round-trip decimal string
// (so 0.1 is exactly 1/10) and squared in arbitrary-precision integers. The
// results below are exact; no floating comparison happens at a boundary.

/// ceil(x^2) for x >= 0. Throws RangeError when the result exceeds int64.
std::int64_t ceil_square(double x);

/// ceil((x + y)^2) with the sum formed exactly in decimal. x, y >= 0.
std::int64_t ceil_square_of_sum(double x, double y);

/// floor(x^2) for x >= 0.
std::int64_t floor_square(double x);

/// Sign of m - x^2 (-1, 0, +1), evaluated exactly.
int compare_with_square(std::int64_t m, double x);

/// Sign of m - (x + y)^2, evaluated exactly.
int compare_with_square_of_sum(std::int64_t m, double x, double y);

/// Shortest round-trip decimal representation used by the functions above.
std::string shortest_decimal(double x);

}  // namespace clusterlab::exact
