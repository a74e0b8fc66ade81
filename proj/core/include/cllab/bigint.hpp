#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace cllab {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline BigInt big_pow(std::int64_t base, unsigned exponent) {
  return boost::multiprecision::pow(BigInt(base), exponent);
}

}  // namespace cllab
