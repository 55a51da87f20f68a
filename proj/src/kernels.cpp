#include "reachlp/kernels.hpp"

#include <cmath>

namespace reachlp::kernels {

namespace scalar {

void axpy(double* dst, const double* src, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += a * src[i];
}

void scale_div(double* dst, double d, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] /= d;
}

void abs_inplace(double* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = std::fabs(dst[i]);
}

std::size_t find_below(const double* v, std::size_t n, double threshold) {
  for (std::size_t i = 0; i < n; ++i)
    if (v[i] < threshold) return i;
  return npos;
}

}  // namespace scalar

#ifdef REACHLP_HAVE_AVX2
namespace avx2 {
void axpy(double* dst, const double* src, double a, std::size_t n);
void scale_div(double* dst, double d, std::size_t n);
void abs_inplace(double* dst, std::size_t n);
std::size_t find_below(const double* v, std::size_t n, double threshold);
}  // namespace avx2
#endif

namespace {

struct Dispatch {
  void (*axpy)(double*, const double*, double, std::size_t);
  void (*scale_div)(double*, double, std::size_t);
  void (*abs_inplace)(double*, std::size_t);
  std::size_t (*find_below)(const double*, std::size_t, double);
};

constexpr Dispatch kScalar{scalar::axpy, scalar::scale_div, scalar::abs_inplace,
                           scalar::find_below};

#ifdef REACHLP_HAVE_AVX2
constexpr Dispatch kAvx2{avx2::axpy, avx2::scale_div, avx2::abs_inplace,
                         avx2::find_below};
#endif

bool detect_avx2() {
#ifdef REACHLP_HAVE_AVX2
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

Dispatch g_active = detect_avx2() ?
#ifdef REACHLP_HAVE_AVX2
                                  kAvx2
#else
                                  kScalar
#endif
                                  : kScalar;
Backend g_backend = Backend::Auto;

}  // namespace

bool avx2_supported() { return detect_avx2(); }

bool set_backend(Backend b) {
  switch (b) {
    case Backend::Scalar:
      g_active = kScalar;
      break;
    case Backend::Avx2:
#ifdef REACHLP_HAVE_AVX2
      if (!detect_avx2()) return false;
      g_active = kAvx2;
      break;
#else
      return false;
#endif
    case Backend::Auto:
#ifdef REACHLP_HAVE_AVX2
      g_active = detect_avx2() ? kAvx2 : kScalar;
#else
      g_active = kScalar;
#endif
      break;
  }
  g_backend = b;
  return true;
}

Backend active_backend() {
  if (g_backend != Backend::Auto) return g_backend;
#ifdef REACHLP_HAVE_AVX2
  return detect_avx2() ? Backend::Avx2 : Backend::Scalar;
#else
  return Backend::Scalar;
#endif
}

void axpy(double* dst, const double* src, double a, std::size_t n) {
  g_active.axpy(dst, src, a, n);
}

void scale_div(double* dst, double d, std::size_t n) {
  g_active.scale_div(dst, d, n);
}

void abs_inplace(double* dst, std::size_t n) { g_active.abs_inplace(dst, n); }

std::size_t find_below(const double* v, std::size_t n, double threshold) {
  return g_active.find_below(v, n, threshold);
}

}  // namespace reachlp::kernels
