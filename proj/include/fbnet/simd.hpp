#pragma once

#include <cstddef>

// Dense vector kernels behind the numeric inner loops (skip-gram updates,
// GCN matrix products, feature standardization). Scalar reference
// implementations always exist; an AVX2 variant is selected at runtime when
// the CPU supports it. The two are equivalence-tested against each other.
//
// Results are deterministic for a fixed backend. Backend selection itself is
// stable on a given machine, which is what the reproducibility contract
// (same seed + same machine => identical output) requires.

namespace fbnet::simd {

enum class Backend { scalar, avx2 };

// The backend in effect (resolved once; honors FBNET_SIMD=scalar|avx2).
Backend active_backend();
const char* backend_name();

// Test hook: force a specific backend. Returns false if unsupported on this
// CPU (the request is then ignored).
bool force_backend(Backend b);

// f64 kernels
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);  // y += alpha*x
void scale(double alpha, double* x, std::size_t n);
double sum(const double* x, std::size_t n);
double sumsq(const double* x, std::size_t n);

// f32 kernels (embedding training)
float dotf(const float* a, const float* b, std::size_t n);
void axpyf(float alpha, const float* x, float* y, std::size_t n);

}  // namespace fbnet::simd
