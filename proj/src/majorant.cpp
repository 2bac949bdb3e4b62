#include "pqsq/majorant.hpp"

#include <cmath>
#include <stdexcept>

namespace pqsq {

Majorant Majorant::power(double q) {
    if (!(q > 0.0) || q > 2.0)
        throw std::invalid_argument("power majorant requires 0 < q <= 2");
    return Majorant(Kind::power, q);
}

Majorant Majorant::penalty_mixture(double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("penalty mixture requires alpha in (0, 1]");
    return Majorant(Kind::penalty_mixture, alpha);
}

Majorant Majorant::from_name(const std::string& name, double param) {
    if (name == "absolute" || name == "l1") return absolute();
    if (name == "square" || name == "l2") return square();
    if (name == "log1p") return log1p_abs();
    if (name == "power") return power(param);
    if (name == "penalty-mixture" || name == "elasticnet") return penalty_mixture(param);
    throw std::invalid_argument("unknown majorant: " + name);
}

double Majorant::operator()(double x) const {
    const double ax = std::fabs(x);
    switch (kind_) {
        case Kind::absolute: return ax;
        case Kind::power: return std::pow(ax, param_);
        case Kind::log1p_abs: return std::log1p(ax);
        case Kind::square: return x * x;
        case Kind::penalty_mixture:
            return (1.0 - param_) / param_ * x * x + param_ * ax;
    }
    return 0.0;
}

std::string Majorant::name() const {
    switch (kind_) {
        case Kind::absolute: return "absolute";
        case Kind::power: return "power";
        case Kind::log1p_abs: return "log1p";
        case Kind::square: return "square";
        case Kind::penalty_mixture: return "penalty-mixture";
    }
    return "?";
}

}  // namespace pqsq
