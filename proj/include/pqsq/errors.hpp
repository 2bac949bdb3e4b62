#pragma once

#include <stdexcept>
#include <string>

namespace pqsq {

// Raised when an iteration fails numerically (iteration cap hit, singular
// system, degenerate configuration discovered mid-fit). Distinct from
// std::invalid_argument so callers can map the two to different exit codes.
class numeric_error : public std::runtime_error {
  public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pqsq
