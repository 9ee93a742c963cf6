#pragma once

#include <cstdint>
#include <iosfwd>

namespace sixvertex {

struct SelftestOptions {
  std::uint64_t seed = 20240601;
  /// Debug hook: negates the L=2 reference closed form so the first check
  /// must fail; exercises the failure-reporting path.
  bool corruptL2Reference = false;
};

/// Runs the closed-form regression corpus (printed formulas, eigenvalue
/// tables, structural matrices, chain identities). Prints one line per check
/// and returns the number of failures.
int run_selftest(std::ostream& out, const SelftestOptions& options = {});

}  // namespace sixvertex
