#include "kernels_backends.hpp"

#include <cmath>
#include <limits>

// Reference kernels. Straight loops, no manual unrolling; these define
// the semantics the SIMD backends are tested against.

namespace pqsq::kernels::scalar {

namespace {

inline int idx_of(double d, const PotentialRow& row) {
    const double ad = std::fabs(d);
    int s = 0;
    for (int j = 1; j <= row.p; ++j) s += (ad >= row.r[j]);
    return s;
}

void interval_index(const double* x, double shift, const PotentialRow& row,
                    std::int32_t* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = static_cast<std::int32_t>(idx_of(x[i] - shift, row));
}

void interval_weights(const double* x, double shift, const PotentialRow& row,
                      double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = row.a[idx_of(x[i] - shift, row)];
}

void potential_eval(const double* x, double shift, const PotentialRow& row,
                    double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - shift;
        const int s = idx_of(d, row);
        out[i] = row.b[s] + row.a[s] * (d * d);
    }
}

void potential_accum(const double* x, double shift, const PotentialRow& row,
                     double* acc, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - shift;
        const int s = idx_of(d, row);
        acc[i] += row.b[s] + row.a[s] * (d * d);
    }
}

double potential_sum(const double* x, double shift, const PotentialRow& row,
                     std::size_t n) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - shift;
        const int s = idx_of(d, row);
        total += row.b[s] + row.a[s] * (d * d);
    }
    return total;
}

void residual(double* dst, const double* x, double center, const double* nu,
              double vk, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = x[i] - center - vk * nu[i];
}

double dot(const double* x, const double* y, std::size_t n) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += x[i] * y[i];
    return total;
}

double dot3(const double* w, const double* x, const double* y, std::size_t n) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += w[i] * x[i] * y[i];
    return total;
}

double sum(const double* x, std::size_t n) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += x[i];
    return total;
}

void scaled_mul_add(double* dst, const double* a, const double* x, double c,
                    std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] += c * a[i] * x[i];
}

void scaled_add(double* dst, const double* a, double c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] += c * a[i];
}

void minmax(const double* x, std::size_t n, double* lo, double* hi) {
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        mn = x[i] < mn ? x[i] : mn;
        mx = x[i] > mx ? x[i] : mx;
    }
    *lo = mn;
    *hi = mx;
}

void argmin_merge(double* best, std::int32_t* best_idx, const double* cand,
                  std::int32_t idx, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (cand[i] < best[i]) {
            best[i] = cand[i];
            best_idx[i] = idx;
        }
    }
}

}  // namespace

const Ops ops = {
    interval_index, interval_weights, potential_eval, potential_accum,
    potential_sum,  residual,         dot,            dot3,
    sum,            scaled_mul_add,   scaled_add,     minmax,
    argmin_merge,
};

}  // namespace pqsq::kernels::scalar
