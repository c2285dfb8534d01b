#pragma once

#include <cmath>
#include <cstdint>

namespace dlalab {

// ceil for index expressions like ceil(2*eps*n); the nudge keeps values that
// are integers in exact arithmetic from rounding up a slot.
inline std::int64_t ceil_index(double x) {
    return static_cast<std::int64_t>(std::ceil(x - 1e-9));
}

}  // namespace dlalab
