#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "pqsq/kernels.hpp"
#include "pqsq/majorant.hpp"

namespace pqsq {

// How per-coordinate interval thresholds are derived from data.
struct IntervalConfig {
    enum class Distance { amplitude, mad };

    int count = 5;         // number of finite segments p
    double scale = 1.0;    // alpha_scale
    Distance distance = Distance::amplitude;
    // When nonempty, used verbatim for every coordinate (must start at 0,
    // strictly increasing); count/scale/distance are then ignored.
    std::vector<double> explicit_thresholds;
    bool trimmed = false;
};

// Per-coordinate piecewise-quadratic potential u(x) = b_s + a_s x^2 on
// r_s <= |x| < r_{s+1}. Immutable after construction; safe to share
// across threads.
class PotentialSpec {
  public:
    // Structural validation only (sizes, r_0 = 0, strictly increasing
    // knots, b_0 = 0, a_p = 0, continuity at the knots); growth is
    // checked separately so that invalid-growth specs can be probed.
    static PotentialSpec from_raw(std::optional<Majorant> majorant,
                                  std::vector<std::vector<double>> thresholds,
                                  std::vector<std::vector<double>> a,
                                  std::vector<std::vector<double>> b, bool trimmed);

    std::size_t coordinates() const { return r_.size(); }
    int segments() const { return p_; }  // p

    double evaluate(std::size_t k, double x) const;
    int interval_index(std::size_t k, double x) const;

    kernels::PotentialRow row(std::size_t k) const {
        return {r_[k].data(), a_[k].data(), b_[k].data(), p_};
    }

    const std::vector<double>& thresholds(std::size_t k) const { return r_[k]; }
    const std::vector<double>& coeff_a(std::size_t k) const { return a_[k]; }
    const std::vector<double>& coeff_b(std::size_t k) const { return b_[k]; }
    bool trimmed() const { return trimmed_; }
    const std::optional<Majorant>& majorant() const { return majorant_; }

    // Largest finite knot of coordinate k.
    double cap(std::size_t k) const { return r_[k][static_cast<std::size_t>(p_)]; }

  private:
    PotentialSpec() = default;

    std::optional<Majorant> majorant_;
    std::vector<std::vector<double>> r_, a_, b_;
    int p_ = 0;
    bool trimmed_ = false;
};

// Interpolating coefficients for one coordinate; thresholds must start at
// 0 and be strictly increasing, f(0) must be 0.
PotentialSpec build_potential(const Majorant& f,
                              const std::vector<std::vector<double>>& thresholds,
                              bool trimmed = false);
PotentialSpec build_potential(const std::function<double(double)>& f,
                              const std::vector<std::vector<double>>& thresholds,
                              bool trimmed = false);
// Skips the growth check (for probing majorants that are unfit).
PotentialSpec build_potential_unchecked(const std::function<double(double)>& f,
                                        const std::vector<std::vector<double>>& thresholds,
                                        bool trimmed = false);

// r_j = D j^2 / p^2, j = 0..p.
std::vector<double> default_intervals(double characteristic_distance, int p);

// Scale of one data column: amplitude (max-min) or median absolute
// deviation, times cfg.scale. MAD of a degenerate column is an error.
double characteristic_distance(const std::vector<double>& column,
                               const IntervalConfig& cfg);
double characteristic_distance(const double* column, std::size_t n,
                               const IntervalConfig& cfg);

// True iff a is nonincreasing and b nondecreasing in every coordinate.
bool check_subquadratic(const PotentialSpec& spec);

}  // namespace pqsq
