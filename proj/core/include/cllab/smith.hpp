#pragma once

#include <cstdint>
#include <vector>

namespace cllab {

/// Dense integer matrix, row-major.
struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> data;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

  std::int64_t& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  static IntMatrix identity(std::size_t n);
};

/// Smith form of a relation matrix whose ROWS are relations on Z^cols.
///
/// diagonal has length cols: the group Z^cols / rowspace is the direct sum of
/// Z/diagonal[i] (0 meaning a free summand), with diagonal[i] | diagonal[i+1]
/// among the nonzero entries and zeros last. column_transform V is unimodular
/// and maps old coordinates x to new coordinates x*V.
struct SmithResult {
  std::vector<std::int64_t> diagonal;
  IntMatrix column_transform;
};

/// Throws cllab::Error if an intermediate entry overflows 64 bits.
SmithResult smith_normal_form(const IntMatrix& relations);

/// Invariant factors (> 1) of Z^cols / rowspace; throws if the quotient is infinite.
std::vector<std::int64_t> invariant_factors(const IntMatrix& relations);

/// Exponents v_i of the cokernel of an n x m matrix over Z/p^e, i.e.
/// Z_p^n / M Z_p^m truncated: one entry per row, v_i in [0, e], where v_i = e
/// also covers entries that vanish mod p^e. Entries are reduced mod p^e.
std::vector<int> local_smith_exponents(std::vector<std::uint64_t> matrix, std::size_t rows,
                                       std::size_t cols, std::uint64_t p, int e);

}  // namespace cllab
