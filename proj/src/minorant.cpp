#include "pqsq/minorant.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pqsq/errors.hpp"

namespace pqsq {

QuadraticForm QuadraticForm::diagonal(double q0, Eigen::VectorXd q1, Eigen::VectorXd diag) {
    QuadraticForm f;
    f.q0 = q0;
    f.q1 = std::move(q1);
    f.q2 = diag.asDiagonal();
    return f;
}

MinorantFunction::MinorantFunction(std::vector<QuadraticForm> forms)
    : forms_(std::move(forms)) {
    if (forms_.empty()) throw std::invalid_argument("minorant needs at least one form");
    dim_ = forms_[0].q1.size();
    for (const auto& f : forms_) {
        if (f.q1.size() != dim_ || f.q2.rows() != dim_ || f.q2.cols() != dim_)
            throw std::invalid_argument("minorant forms must share one dimension");
        const double scale = f.q2.cwiseAbs().maxCoeff();
        if ((f.q2 - f.q2.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, scale))
            throw std::invalid_argument("quadratic form matrix must be symmetric");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(f.q2);
        const double lo = eig.eigenvalues().minCoeff();
        const double hi = eig.eigenvalues().maxCoeff();
        if (!(lo > 1e-12 * std::max(1.0, hi)))
            throw std::invalid_argument(
                "quadratic form is not positive definite (no unique minimizer)");
    }
}

double MinorantFunction::evaluate(const Eigen::VectorXd& x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : forms_) best = std::min(best, f.value(x));
    return best;
}

std::vector<int> MinorantFunction::multiindex(const Eigen::VectorXd& x, double tol) const {
    const double floor = evaluate(x);
    std::vector<int> out;
    for (std::size_t i = 0; i < forms_.size(); ++i)
        if (forms_[i].value(x) <= floor + tol) out.push_back(static_cast<int>(i));
    return out;
}

MinorantFunction MinorantFunction::combine(const MinorantFunction& u,
                                           const MinorantFunction& v, double alpha,
                                           double beta) {
    if (alpha < 0.0 || beta < 0.0)
        throw std::invalid_argument("conic combination needs alpha, beta >= 0");
    std::vector<QuadraticForm> combined;
    combined.reserve(u.size() * v.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            QuadraticForm f;
            f.q0 = alpha * u.form(i).q0 + beta * v.form(j).q0;
            f.q1 = alpha * u.form(i).q1 + beta * v.form(j).q1;
            f.q2 = alpha * u.form(i).q2 + beta * v.form(j).q2;
            combined.push_back(std::move(f));
        }
    }
    return MinorantFunction(std::move(combined));
}

SplitResult splitting_minimize(const MinorantFunction& u, const Eigen::VectorXd& x0,
                               double tie_tol, int max_iter) {
    if (x0.size() != u.dim()) throw std::invalid_argument("x0 dimension mismatch");
    Eigen::VectorXd x = x0;
    double value = u.evaluate(x);
    std::vector<int> active_prev;
    SplitResult result;
    result.trace.push_back(value);

    for (int iter = 1; iter <= max_iter; ++iter) {
        const std::vector<int> active = u.multiindex(x, tie_tol * (1.0 + std::fabs(value)));
        if (!active_prev.empty() && active == active_prev) {
            result.x = std::move(x);
            result.value = value;
            result.iterations = iter;
            return result;
        }

        // deepest candidate among the active forms, lowest index on ties
        Eigen::VectorXd best_x;
        double best_value = std::numeric_limits<double>::infinity();
        for (int i : active) {
            Eigen::VectorXd xi = u.form(static_cast<std::size_t>(i)).minimizer();
            const double vi = u.evaluate(xi);
            if (vi < best_value) {
                best_value = vi;
                best_x = std::move(xi);
            }
        }

        if (std::fabs(best_value - value) <= 1e-14 * (1.0 + std::fabs(value))) {
            // value stalled: floating-point tie between forms, accept
            if (best_value <= value) {
                x = std::move(best_x);
                value = best_value;
                result.trace.push_back(value);
            }
            result.x = std::move(x);
            result.value = value;
            result.iterations = iter;
            return result;
        }
        if (best_value > value) {
            // cannot happen in exact arithmetic (the jump target never
            // lies above the current level); treat as converged
            result.x = std::move(x);
            result.value = value;
            result.iterations = iter;
            return result;
        }

        x = std::move(best_x);
        value = best_value;
        result.trace.push_back(value);
        active_prev = active;
    }
    throw numeric_error("splitting_minimize: no fixed point within " +
                        std::to_string(max_iter) + " iterations (last value " +
                        std::to_string(u.evaluate(x)) + ")");
}

}  // namespace pqsq
