#pragma once

#include <string>

namespace pqsq {

// Target error function f imitated by a piecewise-quadratic potential.
// All admissible kinds are even, vanish at zero and grow no faster than
// quadratically, which guarantees nonincreasing a and nondecreasing b
// coefficients for any knot placement.
class Majorant {
  public:
    enum class Kind {
        absolute,        // |x|
        power,           // |x|^q, 0 < q <= 2
        log1p_abs,       // ln(1 + |x|)
        square,          // x^2
        penalty_mixture  // ((1-alpha)/alpha) x^2 + alpha |x|, alpha in (0,1]
    };

    static Majorant absolute() { return Majorant(Kind::absolute, 0.0); }
    static Majorant power(double q);
    static Majorant log1p_abs() { return Majorant(Kind::log1p_abs, 0.0); }
    static Majorant square() { return Majorant(Kind::square, 0.0); }
    static Majorant penalty_mixture(double alpha);

    // Parses "absolute", "power", "log1p", "square", "penalty-mixture" and
    // the CLI aliases "l1", "l2", "elasticnet".
    static Majorant from_name(const std::string& name, double param);

    double operator()(double x) const;

    Kind kind() const { return kind_; }
    double param() const { return param_; }  // q or alpha, 0 otherwise
    std::string name() const;

  private:
    Majorant(Kind kind, double param) : kind_(kind), param_(param) {}

    Kind kind_;
    double param_;
};

}  // namespace pqsq
