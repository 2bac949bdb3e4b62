#pragma once

#include <cstddef>
#include <vector>

namespace pqsq {

// Dense observation matrix, rows = points, columns = coordinates.
// Stored column-major: every fitter inner loop walks one coordinate
// across all points. Optional nonnegative per-point weights.
class DataMatrix {
  public:
    DataMatrix() = default;
    DataMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

    static DataMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double at(std::size_t i, std::size_t k) const { return values_[k * rows_ + i]; }
    double& at(std::size_t i, std::size_t k) { return values_[k * rows_ + i]; }

    const double* col(std::size_t k) const { return values_.data() + k * rows_; }
    double* col(std::size_t k) { return values_.data() + k * rows_; }

    std::vector<double> row(std::size_t i) const;
    std::vector<double> column(std::size_t k) const {
        return {col(k), col(k) + rows_};
    }

    bool has_weights() const { return !weights_.empty(); }
    const std::vector<double>& weights() const { return weights_; }
    double weight(std::size_t i) const { return weights_.empty() ? 1.0 : weights_[i]; }
    void set_weights(std::vector<double> w);

    // Throws std::invalid_argument if any entry is non-finite.
    void validate_finite() const;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> values_;
    std::vector<double> weights_;
};

}  // namespace pqsq
