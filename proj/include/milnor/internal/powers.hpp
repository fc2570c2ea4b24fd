#pragma once

#include <complex>

namespace milnor::internal {

// Exact integer power by squaring; std::pow(complex, int) goes through exp/log.
inline std::complex<double> ipow(std::complex<double> base, int e) {
  std::complex<double> result(1.0, 0.0);
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

}  // namespace milnor::internal
