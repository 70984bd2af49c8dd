#include "coderev/kernels.hpp"

#include <stdexcept>
#include <string>

#if defined(__aarch64__) || defined(__ARM_NEON)
#define CODEREV_BUILD_NEON 1
#include <arm_neon.h>
#endif

namespace coderev::kernels {

namespace {

float dot_scalar(const float* a, const float* b, std::size_t n) {
  float acc = 0.0f;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(float a, const float* x, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(float a, float* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

#ifdef CODEREV_BUILD_NEON

float dot_neon(const float* a, const float* b, std::size_t n) {
  float32x4_t acc = vdupq_n_f32(0.0f);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = vmlaq_f32(acc, vld1q_f32(a + i), vld1q_f32(b + i));
  }
  float sum = vaddvq_f32(acc);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy_neon(float a, const float* x, float* y, std::size_t n) {
  const float32x4_t va = vdupq_n_f32(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    vst1q_f32(y + i, vmlaq_f32(vld1q_f32(y + i), va, vld1q_f32(x + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale_neon(float a, float* x, std::size_t n) {
  const float32x4_t va = vdupq_n_f32(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    vst1q_f32(x + i, vmulq_f32(vld1q_f32(x + i), va));
  }
  for (; i < n; ++i) x[i] *= a;
}

#endif  // CODEREV_BUILD_NEON

struct Ops {
  float (*dot)(const float*, const float*, std::size_t);
  void (*axpy)(float, const float*, float*, std::size_t);
  void (*scale)(float, float*, std::size_t);
};

constexpr Ops kScalarOps{dot_scalar, axpy_scalar, scale_scalar};

#ifdef CODEREV_BUILD_NEON
constexpr Ops kNeonOps{dot_neon, axpy_neon, scale_neon};
#endif

}  // namespace

#ifdef CODEREV_BUILD_AVX2
// Defined in kernels_avx2.cpp (the only TU compiled with -mavx2).
float dot_avx2(const float* a, const float* b, std::size_t n);
void axpy_avx2(float a, const float* x, float* y, std::size_t n);
void scale_avx2(float a, float* x, std::size_t n);
#endif

namespace {

bool avx2_usable() {
#if defined(CODEREV_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

bool neon_usable() {
#ifdef CODEREV_BUILD_NEON
  return true;
#else
  return false;
#endif
}

Backend detect_best() {
  if (avx2_usable()) return Backend::Avx2;
  if (neon_usable()) return Backend::Neon;
  return Backend::Scalar;
}

const Ops& ops_for(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return kScalarOps;
    case Backend::Avx2: {
#ifdef CODEREV_BUILD_AVX2
      static const Ops avx2{dot_avx2, axpy_avx2, scale_avx2};
      return avx2;
#else
      break;
#endif
    }
    case Backend::Neon: {
#ifdef CODEREV_BUILD_NEON
      return kNeonOps;
#else
      break;
#endif
    }
  }
  return kScalarOps;
}

struct Dispatch {
  Backend backend = detect_best();
  const Ops* ops = &ops_for(detect_best());
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "?";
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out{Backend::Scalar};
  if (avx2_usable()) out.push_back(Backend::Avx2);
  if (neon_usable()) out.push_back(Backend::Neon);
  return out;
}

Backend active_backend() { return dispatch().backend; }

void force_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_usable())
    throw std::runtime_error("kernel backend avx2 not available on this machine");
  if (b == Backend::Neon && !neon_usable())
    throw std::runtime_error("kernel backend neon not available on this machine");
  dispatch().backend = b;
  dispatch().ops = &ops_for(b);
}

void reset_backend() { force_backend(detect_best()); }

float dot(const float* a, const float* b, std::size_t n) {
  return dispatch().ops->dot(a, b, n);
}

void axpy(float a, const float* x, float* y, std::size_t n) {
  dispatch().ops->axpy(a, x, y, n);
}

void scale(float a, float* x, std::size_t n) {
  dispatch().ops->scale(a, x, n);
}

}  // namespace coderev::kernels
