#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sixvertex/model.hpp"

namespace sixvertex {

struct Tolerances {
  double closedForm = 1e-10;  // oracle-vs-oracle and closed-form regressions
  double endToEnd = 1e-8;     // spectral determinant against the oracles
};

/// Rectangles the random parameters are drawn from; chosen to keep sinh
/// arguments order one and the conditioning benign.
struct SamplingBox {
  double gammaReMin = 0.2, gammaReMax = 1.2;
  double gammaImMin = -0.5, gammaImMax = 0.5;
  double pointReMin = -1.0, pointReMax = 1.0;
  double pointImMin = -0.5, pointImMax = 0.5;
};

struct SweepConfig {
  int Lmin = 3;
  int Lmax = 3;
  int trials = 10;
  std::uint64_t seed = 0;
  Tolerances tol;
  SamplingBox box;
  bool strictSeparation = true;
  std::optional<Complex> fixedGamma;
  int maxResampleAttempts = 25;
};

struct KorepinReport {
  int i = 0, j = 0;
  double residualPinned = 0.0;
  double residualPrinted = 0.0;
  bool printedFormAgrees = false;  // flags the discrepancy with the printed product
  Complex factorPinned{};
  Complex factorPrinted{};
};

struct PointReport {
  int index = 0;
  int L = 0;
  Complex gamma{};
  std::vector<Complex> mu;
  std::vector<Complex> lambda;
  int resamples = 0;
  bool exhausted = false;  // degeneracy retries ran out
  std::vector<std::string> skips;
  double triangleEnumContract = 0.0;
  double triangleContractIzergin = 0.0;
  double triangleEnumIzergin = 0.0;
  std::vector<Complex> kappa0;
  std::vector<double> zResidualPerBranch;
  double zResidualMax = 0.0;
  double branchInvariance = 0.0;
  std::vector<std::pair<int, double>> symmetryResiduals;  // (n, residual)
  KorepinReport korepin;
  double spectrumCondition = 0.0;
  double hConditionMax = 0.0;
  std::string verdict;  // PASS, FAIL or SKIP
};

struct VerificationReport {
  SweepConfig config;
  std::vector<PointReport> points;

  int passCount() const;
  int failCount() const;
  int skipCount() const;
  int exhaustedCount() const;
  bool pass() const;

  std::string to_json() const;
  std::string to_csv() const;
};

/// Runs the whole residual battery on (Lmax - Lmin + 1) * trials sampled
/// points. Deterministic for a given config; points run on a worker pool and
/// merge in index order.
VerificationReport run_verify(const SweepConfig& config);

/// Grid config loaded from a JSON file: each (gamma, L) cell runs a verify.
struct SweepFileConfig {
  std::vector<Complex> gammas;
  std::vector<int> Ls;
  int trials = 10;
  std::uint64_t seed = 0;
  Tolerances tol;
  SamplingBox box;
  bool strictSeparation = true;
};

SweepFileConfig parse_sweep_config(const std::string& jsonText);

struct SweepRow {
  Complex gamma{};
  int L = 0;
  VerificationReport report;
};

struct SweepReport {
  SweepFileConfig config;
  std::vector<SweepRow> rows;

  bool pass() const;
  std::string to_json() const;
  std::string to_csv() const;
};

SweepReport run_sweep(const SweepFileConfig& config);

/// Deterministic uniform sampling independent of the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform(double lo, double hi);
  Complex complexIn(double reLo, double reHi, double imLo, double imHi);
  int below(int n);  // uniform in [0, n)

 private:
  std::uint64_t state_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace sixvertex
