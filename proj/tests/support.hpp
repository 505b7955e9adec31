#pragma once
#include <complex>

namespace testing {

inline double rel(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) / std::abs(b); }

}  // namespace testing
