#pragma once

// Orientation kernels over scaled integer coordinates.
//
// A cell set of n points in d dimensions is pushed through every orientation
// of a symmetry group at once. Orientations are laid out structure-of-arrays
// (one lane per orientation, padded to kLanes) so the vector variants process
// kLanes orientations per instruction. Every variant must agree bit-for-bit
// with the scalar reference.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace polyform::simd {

inline constexpr std::size_t kLanes = 8;

struct OrientationPack {
  std::size_t dim = 0;
  std::size_t count = 0;   // real orientations
  std::size_t padded = 0;  // count rounded up to kLanes
  std::int32_t scale = 1;  // coordinates are multiples of 1/scale
  std::vector<std::int32_t> linear;  // [(i * dim + j) * padded + k]
  std::vector<std::int32_t> offset;  // [i * padded + k], already scaled

  // Rows are row-major d*d integer matrices; offsets are scaled integers.
  // Padding lanes repeat orientation 0.
  static OrientationPack build(std::size_t dim, std::int32_t scale,
                               const std::vector<std::vector<std::int32_t>>& linears,
                               const std::vector<std::vector<std::int32_t>>& offsets);
};

// out[(c * dim + i) * padded + k] = coordinate i of cell c under orientation k,
// after shifting by the multiple of `scale` that puts each axis minimum (over
// the n cells) into [0, scale).
using TransformFn = void (*)(const OrientationPack& pack, const std::int32_t* cells, std::size_t n,
                             std::int32_t* out);

// out[i * padded + k] = coordinate i of the lexicographically least cell of
// orientation k in a transform_normalize result.
using LexMinFn = void (*)(const OrientationPack& pack, const std::int32_t* transformed,
                          std::size_t n, std::int32_t* out);

struct KernelTable {
  std::string_view name;
  TransformFn transform_normalize;
  LexMinFn lex_min;
};

const KernelTable& scalar_kernels();
// nullptr when not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels();
// Best supported table; POLYFORM_SIMD=scalar|avx2 overrides.
const KernelTable& active_kernels();

// floor(a / b) for b > 0.
constexpr std::int32_t floor_div(std::int32_t a, std::int32_t b) {
  std::int32_t q = a / b;
  return (a % b != 0 && a < 0) ? q - 1 : q;
}

}  // namespace polyform::simd
