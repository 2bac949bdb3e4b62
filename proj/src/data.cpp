#include "pqsq/data.hpp"

#include <cmath>
#include <stdexcept>

namespace pqsq {

DataMatrix DataMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("data matrix needs at least one row");
    const std::size_t m = rows[0].size();
    if (m == 0) throw std::invalid_argument("data matrix needs at least one column");
    DataMatrix out(rows.size(), m);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m) throw std::invalid_argument("ragged row in data matrix");
        for (std::size_t k = 0; k < m; ++k) out.at(i, k) = rows[i][k];
    }
    out.validate_finite();
    return out;
}

std::vector<double> DataMatrix::row(std::size_t i) const {
    std::vector<double> out(cols_);
    for (std::size_t k = 0; k < cols_; ++k) out[k] = at(i, k);
    return out;
}

void DataMatrix::set_weights(std::vector<double> w) {
    if (w.size() != rows_) throw std::invalid_argument("weight count != row count");
    for (double v : w)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("weights must be finite and nonnegative");
    weights_ = std::move(w);
}

void DataMatrix::validate_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite entry in data matrix");
}

}  // namespace pqsq
