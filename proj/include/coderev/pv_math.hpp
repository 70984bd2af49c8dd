#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <type_traits>

#include "coderev/kernels.hpp"

// Numeric core of the embedding trainer, templated on the scalar type so the
// float training path and the double-precision gradient checks share one set
// of formulas. The float instantiation routes dot products through the
// runtime-dispatched kernels.

namespace coderev::pvmath {

// splitmix64: tiny, fully specified PRNG so trained artifacts are
// reproducible across standard libraries.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  float uniform_float(float lo, float hi) {
    return lo + static_cast<float>(uniform()) * (hi - lo);
  }
};

template <typename T>
T dot_n(const T* a, const T* b, std::size_t n) {
  if constexpr (std::is_same_v<T, float>) {
    return kernels::dot(a, b, n);
  } else {
    T acc = 0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
  }
}

template <typename T>
void axpy_n(T a, const T* x, T* y, std::size_t n) {
  if constexpr (std::is_same_v<T, float>) {
    kernels::axpy(a, x, y, n);
  } else {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
  }
}

template <typename T>
T sigmoid(T x) {
  if (x >= T(0)) {
    const T e = std::exp(-x);
    return T(1) / (T(1) + e);
  }
  const T e = std::exp(x);
  return e / (T(1) + e);
}

// log(1 + exp(x)) without overflow.
template <typename T>
T softplus(T x) {
  if (x > T(0)) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

// One negative-sampling event: predictor vector h against m target rows with
// binary labels (index 0 is the positive target, the rest are negatives).
//
//   loss    = sum_j  label_j ? -log sigmoid(h.o_j) : -log sigmoid(-h.o_j)
//   coef_j  = sigmoid(h.o_j) - label_j            (d loss / d (h.o_j))
//
// so the gradients are  dL/dh = sum_j coef_j * o_j  and  dL/do_j = coef_j * h.
// RowAt maps a slot index to the row pointer.
template <typename T, typename RowAt>
T ns_forward(const T* h, std::size_t dim, const int* labels, std::size_t m,
             RowAt row_at, T* coef) {
  T loss = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const T* row = row_at(j);
    const T f = dot_n(h, row, dim);
    coef[j] = sigmoid(f) - static_cast<T>(labels[j]);
    loss += labels[j] ? softplus(-f) : softplus(f);
  }
  return loss;
}

}  // namespace coderev::pvmath
