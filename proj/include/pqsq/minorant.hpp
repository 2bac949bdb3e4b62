#pragma once

#include <Eigen/Dense>
#include <vector>

namespace pqsq {

// q(x) = q0 + q1.x + x.Q2 x  with Q2 symmetric positive definite.
struct QuadraticForm {
    double q0 = 0.0;
    Eigen::VectorXd q1;
    Eigen::MatrixXd q2;

    double value(const Eigen::VectorXd& x) const {
        return q0 + q1.dot(x) + x.dot(q2 * x);
    }

    // Stationary point of the form: 2 Q2 x = -q1.
    Eigen::VectorXd minimizer() const { return q2.ldlt().solve(-0.5 * q1); }

    static QuadraticForm diagonal(double q0, Eigen::VectorXd q1, Eigen::VectorXd diag);
};

// Pointwise minimum of finitely many positive-definite quadratic forms.
// Indices into forms() are 0-based. Immutable and shareable.
class MinorantFunction {
  public:
    // Throws std::invalid_argument on an empty set, mismatched dimensions,
    // an asymmetric matrix, or a form without a unique minimizer.
    explicit MinorantFunction(std::vector<QuadraticForm> forms);

    double evaluate(const Eigen::VectorXd& x) const;

    // {i : q_i(x) <= evaluate(x) + tol}
    std::vector<int> multiindex(const Eigen::VectorXd& x, double tol) const;

    std::size_t size() const { return forms_.size(); }
    Eigen::Index dim() const { return dim_; }
    const QuadraticForm& form(std::size_t i) const { return forms_[i]; }

    // Conic combination alpha*u + beta*v: the minorant over all pairwise
    // combinations alpha*q_i + beta*p_j.
    static MinorantFunction combine(const MinorantFunction& u, const MinorantFunction& v,
                                    double alpha, double beta);

  private:
    std::vector<QuadraticForm> forms_;
    Eigen::Index dim_ = 0;
};

struct SplitResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    std::vector<double> trace;  // minorant value per iteration, nonincreasing
};

// Active-set descent: jump to the deepest minimizer among the forms
// attaining the current value, stop when the active set repeats (or the
// value stalls below 1e-14 relative, a float-only safeguard).
// tie_tol scales the active-set tolerance as tie_tol*(1+|u(x)|).
// Throws numeric_error if max_iter is exhausted.
SplitResult splitting_minimize(const MinorantFunction& u, const Eigen::VectorXd& x0,
                               double tie_tol = 1e-12, int max_iter = 1000);

}  // namespace pqsq
