#include "fbnet/simd.hpp"

#include <cstdlib>
#include <cstring>

namespace fbnet::simd {

namespace scalar {
double dot(const double*, const double*, std::size_t);
void axpy(double, const double*, double*, std::size_t);
void scale(double, double*, std::size_t);
double sum(const double*, std::size_t);
double sumsq(const double*, std::size_t);
float dotf(const float*, const float*, std::size_t);
void axpyf(float, const float*, float*, std::size_t);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double*, const double*, std::size_t);
void axpy(double, const double*, double*, std::size_t);
void scale(double, double*, std::size_t);
double sum(const double*, std::size_t);
double sumsq(const double*, std::size_t);
float dotf(const float*, const float*, std::size_t);
void axpyf(float, const float*, float*, std::size_t);
}  // namespace avx2
#endif

namespace {

struct Kernels {
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*scale)(double, double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    double (*sumsq)(const double*, std::size_t);
    float (*dotf)(const float*, const float*, std::size_t);
    void (*axpyf)(float, const float*, float*, std::size_t);
};

constexpr Kernels kScalar = {scalar::dot, scalar::axpy, scalar::scale,
                             scalar::sum, scalar::sumsq, scalar::dotf, scalar::axpyf};

#if defined(__x86_64__) || defined(_M_X64)
constexpr Kernels kAvx2 = {avx2::dot, avx2::axpy, avx2::scale,
                           avx2::sum, avx2::sumsq, avx2::dotf, avx2::axpyf};
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

struct State {
    Backend backend;
    Kernels kernels;

    State() {
        backend = Backend::scalar;
        kernels = kScalar;
        bool want_avx2 = cpu_has_avx2();
        if (const char* env = std::getenv("FBNET_SIMD")) {
            if (std::strcmp(env, "scalar") == 0) want_avx2 = false;
            // "avx2" keeps the CPU-capability decision.
        }
#if defined(__x86_64__) || defined(_M_X64)
        if (want_avx2) {
            backend = Backend::avx2;
            kernels = kAvx2;
        }
#endif
    }
};

State& state() {
    static State s;
    return s;
}

}  // namespace

Backend active_backend() { return state().backend; }

const char* backend_name() {
    return state().backend == Backend::avx2 ? "avx2" : "scalar";
}

bool force_backend(Backend b) {
    if (b == Backend::avx2) {
        if (!cpu_has_avx2()) return false;
#if defined(__x86_64__) || defined(_M_X64)
        state().backend = Backend::avx2;
        state().kernels = kAvx2;
        return true;
#else
        return false;
#endif
    }
    state().backend = Backend::scalar;
    state().kernels = kScalar;
    return true;
}

double dot(const double* a, const double* b, std::size_t n) { return state().kernels.dot(a, b, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { state().kernels.axpy(alpha, x, y, n); }
void scale(double alpha, double* x, std::size_t n) { state().kernels.scale(alpha, x, n); }
double sum(const double* x, std::size_t n) { return state().kernels.sum(x, n); }
double sumsq(const double* x, std::size_t n) { return state().kernels.sumsq(x, n); }
float dotf(const float* a, const float* b, std::size_t n) { return state().kernels.dotf(a, b, n); }
void axpyf(float alpha, const float* x, float* y, std::size_t n) { state().kernels.axpyf(alpha, x, y, n); }

}  // namespace fbnet::simd
