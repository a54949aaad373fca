#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace xxzsim {

using cx = std::complex<double>;

// Error taxonomy, mapped onto CLI exit codes by tools/simulate:
//   validation/config problems -> 1, capacity -> 2, analysis -> 3.
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct analysis_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kMaxQubits = 30;

}  // namespace xxzsim
