#pragma once

#include <cstdint>
#include <string>

#include "cllab/bigint.hpp"

namespace cllab {

/// Exact empirical average sum / (count * scale) with its predicted limit.
struct AverageRow {
  std::string label;
  std::string kind;  // "pic0", "cl", "pointed", "pointed_sym"
  std::string target;
  BigInt sum = 0;
  std::uint64_t count = 0;
  std::uint64_t scale = 1;  // 2 for rows that add the counts at a and -a
  double expected = 0.0;

  BigRational exact() const { return count == 0 ? BigRational(0) : BigRational(sum, BigInt(count) * scale); }
  double value() const { return exact().convert_to<double>(); }
};

}  // namespace cllab
