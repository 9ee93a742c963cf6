#pragma once

#include <map>
#include <span>
#include <vector>

#include "sixvertex/model.hpp"
#include "sixvertex/transfer.hpp"

namespace sixvertex {

struct ChainConfig {
  int branch = 0;
  Complex f0{1.0};  // normalization; the linear system scales with it
};

struct ComplexLess {
  bool operator()(const Complex& a, const Complex& b) const {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  }
};

/// Recursive evaluator of the chain F_0, F_1, ..., F_L for one eigenvalue
/// branch: F_{n+1}(t_0..t_n) = Lambda(t_0) F_n(t_1..t_n) minus the M- and
/// N-weighted F_{n-1} terms, the first tuple element playing the lambda_0
/// role. With canonicalize on, tuples are sorted before evaluation so the
/// exponential recursion shares subsets; symmetry tests must run raw.
class ChainEvaluator {
 public:
  ChainEvaluator(const SpectrumTable& spectrum, ChainConfig config, bool canonicalize = true);

  Complex eval_F(std::span<const Complex> points);

  /// Max relative change of F_n under adjacent transpositions of the tuple.
  /// Always evaluates raw (unsorted); zero by convention for n < 2.
  double symmetry_residual(std::span<const Complex> points);

 private:
  Complex lambda_at(Complex lambda);
  Complex recurse(std::vector<Complex> tuple, bool canonical);

  const SpectrumTable& spectrum_;
  ChainConfig config_;
  bool canonicalize_;
  struct TupleLess {
    bool operator()(const std::vector<Complex>& a, const std::vector<Complex>& b) const {
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                          ComplexLess{});
    }
  };
  std::map<std::vector<Complex>, Complex, TupleLess> memo_;
  std::map<Complex, Complex, ComplexLess> lambdaMemo_;
};

/// F_L(points) / Z(points) per batch entry, with the relative spread of the
/// ratio over the batch. The ratio should be constant and equal f0 / kappa0.
struct ChainRatio {
  std::vector<Complex> ratios;
  Complex mean{};
  double spread = 0.0;
};

ChainRatio fL_vs_Z(const SpectrumTable& spectrum, ChainConfig config,
                   const std::vector<SpectralPoints>& batch);

}  // namespace sixvertex
