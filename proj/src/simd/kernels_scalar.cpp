#include <algorithm>
#include <limits>

#include "polyform/simd/kernels.hpp"

namespace polyform::simd {

OrientationPack OrientationPack::build(std::size_t dim, std::int32_t scale,
                                       const std::vector<std::vector<std::int32_t>>& linears,
                                       const std::vector<std::vector<std::int32_t>>& offsets) {
  OrientationPack p;
  p.dim = dim;
  p.count = linears.size();
  p.padded = (p.count + kLanes - 1) / kLanes * kLanes;
  p.scale = scale;
  p.linear.assign(dim * dim * p.padded, 0);
  p.offset.assign(dim * p.padded, 0);
  for (std::size_t k = 0; k < p.padded; ++k) {
    std::size_t src = k < p.count ? k : 0;
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) p.linear[(i * dim + j) * p.padded + k] = linears[src][i * dim + j];
      p.offset[i * p.padded + k] = offsets[src][i];
    }
  }
  return p;
}

namespace {

void transform_normalize_scalar(const OrientationPack& pack, const std::int32_t* cells, std::size_t n,
                                std::int32_t* out) {
  const std::size_t d = pack.dim, P = pack.padded;
  for (std::size_t k = 0; k < P; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      std::int32_t lo = std::numeric_limits<std::int32_t>::max();
      for (std::size_t c = 0; c < n; ++c) {
        std::int32_t acc = pack.offset[i * P + k];
        for (std::size_t j = 0; j < d; ++j) acc += pack.linear[(i * d + j) * P + k] * cells[c * d + j];
        out[(c * d + i) * P + k] = acc;
        lo = std::min(lo, acc);
      }
      std::int32_t shift = -floor_div(lo, pack.scale) * pack.scale;
      for (std::size_t c = 0; c < n; ++c) out[(c * d + i) * P + k] += shift;
    }
  }
}

void lex_min_scalar(const OrientationPack& pack, const std::int32_t* t, std::size_t n, std::int32_t* out) {
  const std::size_t d = pack.dim, P = pack.padded;
  for (std::size_t k = 0; k < P; ++k) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < n; ++c) {
      for (std::size_t i = 0; i < d; ++i) {
        std::int32_t a = t[(c * d + i) * P + k], b = t[(best * d + i) * P + k];
        if (a != b) {
          if (a < b) best = c;
          break;
        }
      }
    }
    for (std::size_t i = 0; i < d; ++i) out[i * P + k] = t[(best * d + i) * P + k];
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", transform_normalize_scalar, lex_min_scalar};
  return table;
}

}  // namespace polyform::simd
