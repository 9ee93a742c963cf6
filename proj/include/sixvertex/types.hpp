#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace sixvertex {

using Complex = std::complex<double>;

/// Error categories surfaced by the numerical layer.
enum class Errc {
  Separation,          // spectral/inhomogeneity parameters too close (sinh denominator)
  PoleProximity,       // a-type denominator near zero
  DegenerateSpectrum,  // eigenbasis ill-conditioned, table unusable
  EigenvalueZeroAtMu,  // branch eigenvalue vanishes at an inhomogeneity point
  DimensionGuard,      // lattice length exceeds a cost guard
  Precondition,        // contract violated by the caller
  IndexRange,          // subset/branch/rank index out of range
  Config,              // CLI / config file problem
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace sixvertex
