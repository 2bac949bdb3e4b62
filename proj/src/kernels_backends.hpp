#pragma once

#include "pqsq/kernels.hpp"

// Internal: per-backend dispatch tables, defined in kernels_<name>.cpp.

namespace pqsq::kernels {

namespace scalar {
extern const Ops ops;
}

#if defined(__x86_64__) || defined(_M_X64)
#define PQSQ_HAVE_AVX2_BACKEND 1
namespace avx2 {
extern const Ops ops;
}
#endif

}  // namespace pqsq::kernels
