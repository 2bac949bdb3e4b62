#include "pqsq/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pqsq/errors.hpp"

namespace pqsq {

namespace {

void check_thresholds(const std::vector<double>& r) {
    if (r.size() < 2) throw std::invalid_argument("need at least one interval (p >= 1)");
    if (r[0] != 0.0) throw std::invalid_argument("first threshold must be 0");
    for (std::size_t j = 1; j < r.size(); ++j) {
        if (!(r[j] > r[j - 1]) || !std::isfinite(r[j]))
            throw std::invalid_argument("thresholds must be finite and strictly increasing");
    }
}

// Eqs for the interpolating parabolas: segment k spans [r_k, r_{k+1}).
void compute_coefficients(const std::function<double(double)>& f,
                          const std::vector<double>& r, std::vector<double>& a,
                          std::vector<double>& b) {
    const std::size_t p = r.size() - 1;
    a.resize(p + 1);
    b.resize(p + 1);
    for (std::size_t k = 0; k < p; ++k) {
        const double fk = f(r[k]);
        const double fk1 = f(r[k + 1]);
        const double den = r[k] * r[k] - r[k + 1] * r[k + 1];
        a[k] = (fk - fk1) / den;
        b[k] = (fk1 * r[k] * r[k] - fk * r[k + 1] * r[k + 1]) / den;
    }
    a[p] = 0.0;
    b[p] = f(r[p]);
}

bool row_subquadratic(const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t k = 0; k + 1 < a.size(); ++k) {
        const double slack_a = 1e-12 * std::max(1.0, std::fabs(a[k]));
        const double slack_b = 1e-12 * std::max(1.0, std::fabs(b[k + 1]));
        if (a[k + 1] > a[k] + slack_a) return false;
        if (b[k + 1] < b[k] - slack_b) return false;
    }
    return true;
}

double median_inplace(std::vector<double>& v) {
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (n % 2 == 1) return hi;
    double lo = *std::max_element(v.begin(), v.begin() + mid);
    return 0.5 * (lo + hi);
}

}  // namespace

PotentialSpec PotentialSpec::from_raw(std::optional<Majorant> majorant,
                                      std::vector<std::vector<double>> thresholds,
                                      std::vector<std::vector<double>> a,
                                      std::vector<std::vector<double>> b, bool trimmed) {
    if (thresholds.empty()) throw std::invalid_argument("potential needs >= 1 coordinate");
    if (a.size() != thresholds.size() || b.size() != thresholds.size())
        throw std::invalid_argument("coefficient row count mismatch");
    const std::size_t width = thresholds[0].size();
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
        const auto& r = thresholds[k];
        if (r.size() != width || a[k].size() != width || b[k].size() != width)
            throw std::invalid_argument("all coordinates must share the same p");
        check_thresholds(r);
        const std::size_t p = width - 1;
        if (b[k][0] != 0.0) throw std::invalid_argument("b_0 must be 0");
        if (a[k][p] != 0.0) throw std::invalid_argument("a_p must be 0");
        for (std::size_t j = 0; j + 1 < width; ++j) {
            // continuity at the knot r_{j+1}
            const double left = b[k][j] + a[k][j] * r[j + 1] * r[j + 1];
            const double right = b[k][j + 1] + a[k][j + 1] * r[j + 1] * r[j + 1];
            if (std::fabs(left - right) > 1e-10 * std::max(1.0, std::fabs(left)))
                throw std::invalid_argument("potential discontinuous at knot " +
                                            std::to_string(j + 1));
        }
    }
    PotentialSpec spec;
    spec.majorant_ = majorant;
    spec.r_ = std::move(thresholds);
    spec.a_ = std::move(a);
    spec.b_ = std::move(b);
    spec.p_ = static_cast<int>(width - 1);
    spec.trimmed_ = trimmed;
    return spec;
}

double PotentialSpec::evaluate(std::size_t k, double x) const {
    const int s = interval_index(k, x);
    return b_[k][static_cast<std::size_t>(s)] + a_[k][static_cast<std::size_t>(s)] * (x * x);
}

int PotentialSpec::interval_index(std::size_t k, double x) const {
    const double ax = std::fabs(x);
    const auto& r = r_[k];
    int s = 0;
    for (int j = 1; j <= p_; ++j) s += (ax >= r[static_cast<std::size_t>(j)]);
    return s;
}

PotentialSpec build_potential_unchecked(const std::function<double(double)>& f,
                                        const std::vector<std::vector<double>>& thresholds,
                                        bool trimmed) {
    if (f(0.0) != 0.0) throw std::invalid_argument("majorant must satisfy f(0) = 0");
    std::vector<std::vector<double>> a(thresholds.size()), b(thresholds.size());
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
        check_thresholds(thresholds[k]);
        compute_coefficients(f, thresholds[k], a[k], b[k]);
    }
    return PotentialSpec::from_raw(std::nullopt, thresholds, std::move(a), std::move(b),
                                   trimmed);
}

PotentialSpec build_potential(const std::function<double(double)>& f,
                              const std::vector<std::vector<double>>& thresholds,
                              bool trimmed) {
    PotentialSpec spec = build_potential_unchecked(f, thresholds, trimmed);
    if (!check_subquadratic(spec))
        throw std::invalid_argument(
            "majorant violates the subquadratic growth condition on these thresholds");
    return spec;
}

PotentialSpec build_potential(const Majorant& f,
                              const std::vector<std::vector<double>>& thresholds,
                              bool trimmed) {
    std::vector<std::vector<double>> a(thresholds.size()), b(thresholds.size());
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
        check_thresholds(thresholds[k]);
        compute_coefficients([&f](double x) { return f(x); }, thresholds[k], a[k], b[k]);
    }
    PotentialSpec spec =
        PotentialSpec::from_raw(f, thresholds, std::move(a), std::move(b), trimmed);
    if (!check_subquadratic(spec))
        throw std::invalid_argument(
            "majorant violates the subquadratic growth condition on these thresholds");
    return spec;
}

std::vector<double> default_intervals(double characteristic_distance, int p) {
    if (!(characteristic_distance > 0.0))
        throw std::invalid_argument("characteristic distance must be positive");
    if (p < 1) throw std::invalid_argument("interval count must be >= 1");
    std::vector<double> r(static_cast<std::size_t>(p) + 1);
    const double pp = static_cast<double>(p) * static_cast<double>(p);
    for (int j = 0; j <= p; ++j)
        r[static_cast<std::size_t>(j)] =
            characteristic_distance * (static_cast<double>(j) * static_cast<double>(j)) / pp;
    return r;
}

double characteristic_distance(const double* column, std::size_t n,
                               const IntervalConfig& cfg) {
    if (n == 0) throw std::invalid_argument("characteristic distance of an empty column");
    if (cfg.distance == IntervalConfig::Distance::amplitude) {
        double lo, hi;
        kernels::active().minmax(column, n, &lo, &hi);
        return cfg.scale * (hi - lo);
    }
    std::vector<double> work(column, column + n);
    const double med = median_inplace(work);
    for (double& v : work) v = std::fabs(v - med);
    const double mad = median_inplace(work);
    if (mad == 0.0)
        throw numeric_error(
            "MAD is zero for a coordinate; use amplitude mode or drop the coordinate");
    return cfg.scale * mad;
}

double characteristic_distance(const std::vector<double>& column, const IntervalConfig& cfg) {
    return characteristic_distance(column.data(), column.size(), cfg);
}

bool check_subquadratic(const PotentialSpec& spec) {
    for (std::size_t k = 0; k < spec.coordinates(); ++k)
        if (!row_subquadratic(spec.coeff_a(k), spec.coeff_b(k))) return false;
    return true;
}

}  // namespace pqsq
