// AVX2 variants of the row kernels. Compiled with -mavx2; only reached when
// the CPU reports AVX2 at runtime. Plain mul+add throughout: fusing into FMA
// would change results relative to the scalar reference.

#include <immintrin.h>

#include <bit>
#include <cstddef>
#include <cstdint>

namespace reachlp::kernels {
inline constexpr std::size_t npos = static_cast<std::size_t>(-1);
namespace avx2 {

void axpy(double* dst, const double* src, double a, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_loadu_pd(dst + i);
    __m256d s = _mm256_loadu_pd(src + i);
    d = _mm256_add_pd(d, _mm256_mul_pd(va, s));
    _mm256_storeu_pd(dst + i, d);
  }
  for (; i < n; ++i) dst[i] += a * src[i];
}

void scale_div(double* dst, double d, std::size_t n) {
  const __m256d vd = _mm256_set1_pd(d);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_loadu_pd(dst + i);
    _mm256_storeu_pd(dst + i, _mm256_div_pd(x, vd));
  }
  for (; i < n; ++i) dst[i] /= d;
}

void abs_inplace(double* dst, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_loadu_pd(dst + i);
    _mm256_storeu_pd(dst + i, _mm256_andnot_pd(sign, x));
  }
  for (; i < n; ++i) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(dst[i]);
    dst[i] = std::bit_cast<double>(bits & 0x7fffffffffffffffULL);
  }
}

std::size_t find_below(const double* v, std::size_t n, double threshold) {
  const __m256d vt = _mm256_set1_pd(threshold);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_loadu_pd(v + i);
    int mask = _mm256_movemask_pd(_mm256_cmp_pd(x, vt, _CMP_LT_OQ));
    if (mask) return i + static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(mask)));
  }
  for (; i < n; ++i)
    if (v[i] < threshold) return i;
  return npos;
}

}  // namespace avx2
}  // namespace reachlp::kernels
