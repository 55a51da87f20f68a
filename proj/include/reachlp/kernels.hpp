#pragma once

#include <cstddef>

// Row-level primitives behind the simplex pivot and the tangent updates.
// Each has a scalar reference implementation and, on x86-64, an AVX2 variant
// selected at runtime. The two are elementwise-identical (no reassociation,
// no FMA), so results are bitwise equal regardless of the active backend.
namespace reachlp::kernels {

enum class Backend { Auto, Scalar, Avx2 };

// Returns false only when Avx2 was requested on hardware without it.
bool set_backend(Backend b);
Backend active_backend();
bool avx2_supported();

// dst[i] += a * src[i]
void axpy(double* dst, const double* src, double a, std::size_t n);

// dst[i] /= d
void scale_div(double* dst, double d, std::size_t n);

// dst[i] = |dst[i]|
void abs_inplace(double* dst, std::size_t n);

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Smallest i with v[i] < threshold, npos if none.
std::size_t find_below(const double* v, std::size_t n, double threshold);

}  // namespace reachlp::kernels
