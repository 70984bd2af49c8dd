#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

// Vector arithmetic kernels used by the embedding trainer and the store
// scans. Scalar reference implementations always exist; AVX2 (x86) and NEON
// (aarch64) variants are selected at runtime when the CPU supports them.
// SIMD variants may differ from scalar in the last few ulps because the
// summation order differs; equivalence is tested against a tolerance, not
// bitwise. Within one process the selected backend never changes on its own,
// so repeated runs on the same machine are reproducible.

namespace coderev::kernels {

enum class Backend { Scalar, Avx2, Neon };

std::string_view backend_name(Backend b);

// Backends usable on this machine (Scalar always included).
std::vector<Backend> available_backends();

Backend active_backend();

// Pin a backend (tests use this to compare variants). Throws if unavailable.
void force_backend(Backend b);

// Back to the best auto-detected backend.
void reset_backend();

// sum a[i] * b[i]
float dot(const float* a, const float* b, std::size_t n);

// y[i] += a * x[i]
void axpy(float a, const float* x, float* y, std::size_t n);

// x[i] *= a
void scale(float a, float* x, std::size_t n);

}  // namespace coderev::kernels
