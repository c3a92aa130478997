#ifndef ZEROLEAK_IO_HPP_
#define ZEROLEAK_IO_HPP_

#include <string>
#include <string_view>

#include "zeroleak/codec.hpp"
#include "zeroleak/dist.hpp"

namespace zeroleak {

// Distribution files hold named fields, one matrix row per line:
//
//   # Example
//   kernel:            # P_{X|Y}, rows indexed by x
//     1 1 0
//     0 0 1
//   p_y: 1/4 1/4 1/2
//
// or a `joint:` matrix instead of `kernel:` + `p_y:`. Numbers are decimals or
// exact fractions "a/b". Errors carry line:column positions.
JointDistribution ParseDistribution(std::string_view text, double tol = Tolerances{}.prob);
JointDistribution LoadDistribution(const std::string& path, double tol = Tolerances{}.prob);

// Flat "key = value" text; doubles are written with 17 significant digits so
// the round trip is exact.
std::string SerializeCode(const PrivateCode& code);
PrivateCode ParseCode(std::string_view text);

std::string ReadFile(const std::string& path);

// %.17g rendering shared by the serializers.
std::string FormatExact(double v);

}  // namespace zeroleak

#endif  // ZEROLEAK_IO_HPP_
