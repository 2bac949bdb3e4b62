#pragma once

#include <cstddef>
#include <cstdint>

// Inner loops shared by the fitters. Every kernel exists as a scalar
// reference implementation and, on x86-64, an AVX2 variant; the active
// backend is chosen at runtime (CPU probe, PQSQ_KERNEL env var, or
// set_backend). Reduction order is fixed within a backend, so results
// are deterministic for a given backend.

namespace pqsq::kernels {

// One coordinate row of a piecewise-quadratic potential: knots r[0..p]
// with r[0] = 0 and r[p] the last finite knot, parabola coefficients
// a[0..p], b[0..p]. The interval of a residual d is
//   s(d) = #{ j in 1..p : r[j] <= |d| },
// i.e. values exactly at a knot belong to the upper interval.
struct PotentialRow {
    const double* r;
    const double* a;
    const double* b;
    int p;  // index of the last knot; arrays have p+1 entries
};

struct Ops {
    // out[i] = s(x[i] - shift)
    void (*interval_index)(const double* x, double shift, const PotentialRow& row,
                           std::int32_t* out, std::size_t n);
    // out[i] = a[s(x[i] - shift)]
    void (*interval_weights)(const double* x, double shift, const PotentialRow& row,
                             double* out, std::size_t n);
    // out[i] = u(x[i] - shift) = b[s] + a[s]*(x[i]-shift)^2
    void (*potential_eval)(const double* x, double shift, const PotentialRow& row,
                           double* out, std::size_t n);
    // acc[i] += u(x[i] - shift)
    void (*potential_accum)(const double* x, double shift, const PotentialRow& row,
                            double* acc, std::size_t n);
    // sum_i u(x[i] - shift)
    double (*potential_sum)(const double* x, double shift, const PotentialRow& row,
                            std::size_t n);
    // dst[i] = x[i] - center - vk*nu[i]
    void (*residual)(double* dst, const double* x, double center, const double* nu,
                     double vk, std::size_t n);
    // sum_i x[i]*y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // sum_i w[i]*x[i]*y[i]
    double (*dot3)(const double* w, const double* x, const double* y, std::size_t n);
    // sum_i x[i]
    double (*sum)(const double* x, std::size_t n);
    // dst[i] += c*a[i]*x[i]
    void (*scaled_mul_add)(double* dst, const double* a, const double* x, double c,
                           std::size_t n);
    // dst[i] += c*a[i]
    void (*scaled_add)(double* dst, const double* a, double c, std::size_t n);
    void (*minmax)(const double* x, std::size_t n, double* lo, double* hi);
    // where cand[i] < best[i]: best[i] = cand[i], best_idx[i] = idx
    void (*argmin_merge)(double* best, std::int32_t* best_idx, const double* cand,
                         std::int32_t idx, std::size_t n);
};

enum class Backend { scalar, avx2 };

// Dispatch table for the active backend. First call probes the CPU and
// honors PQSQ_KERNEL=scalar|avx2.
const Ops& active();
Backend active_backend();

// Force a backend; returns false (and leaves the selection unchanged)
// if it is not available on this CPU.
bool set_backend(Backend b);
bool backend_available(Backend b);

// Direct access for equivalence tests. Throws std::invalid_argument if
// unavailable.
const Ops& backend_ops(Backend b);

const char* backend_name(Backend b);

}  // namespace pqsq::kernels
