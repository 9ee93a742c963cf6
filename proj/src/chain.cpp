#include "sixvertex/chain.hpp"

#include <algorithm>

#include "sixvertex/kernels.hpp"
#include "sixvertex/oracle.hpp"

namespace sixvertex {

ChainEvaluator::ChainEvaluator(const SpectrumTable& spectrum, ChainConfig config,
                               bool canonicalize)
    : spectrum_(spectrum), config_(config), canonicalize_(canonicalize) {
  if (config_.branch < 0 || config_.branch >= spectrum_.branchCount())
    fail(Errc::IndexRange, "branch out of range");
  if (config_.f0 == Complex{0.0})
    fail(Errc::Precondition, "f0 = 0 collapses the linear system");
}

Complex ChainEvaluator::lambda_at(Complex lambda) {
  auto it = lambdaMemo_.find(lambda);
  if (it != lambdaMemo_.end()) return it->second;
  const Complex v = eigenvalue_at(spectrum_, config_.branch, lambda);
  lambdaMemo_.emplace(lambda, v);
  return v;
}

Complex ChainEvaluator::recurse(std::vector<Complex> tuple, bool canonical) {
  if (canonical) std::sort(tuple.begin(), tuple.end(), ComplexLess{});
  if (tuple.empty()) return config_.f0;
  if (auto it = memo_.find(tuple); it != memo_.end()) return it->second;

  const int n = static_cast<int>(tuple.size()) - 1;  // order of the equation used
  Complex value = lambda_at(tuple[0]) *
                  recurse(std::vector<Complex>(tuple.begin() + 1, tuple.end()), canonical);
  if (n >= 1) {
    const KernelArgs args{tuple, spectrum_.params};
    auto drop_two = [&](int p, int q) {
      std::vector<Complex> rest;
      rest.reserve(tuple.size() - 2);
      for (int t = 0; t <= n; ++t)
        if (t != p && t != q) rest.push_back(tuple[t]);
      return rest;
    };
    for (int i = 1; i <= n; ++i)
      value -= coeff_M(n, i, args) * recurse(drop_two(0, i), canonical);
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        value -= coeff_N(n, j, i, args) * recurse(drop_two(i, j), canonical);
  }
  memo_.emplace(std::move(tuple), value);
  return value;
}

Complex ChainEvaluator::eval_F(std::span<const Complex> points) {
  const int n = static_cast<int>(points.size());
  if (n > spectrum_.params.L) fail(Errc::Precondition, "chain order exceeds L");
  if (n >= 2 && min_separation(points) < spectrum_.params.separationTol)
    fail(Errc::Separation, "chain arguments closer than the separation tolerance");
  return recurse(std::vector<Complex>(points.begin(), points.end()), canonicalize_);
}

double ChainEvaluator::symmetry_residual(std::span<const Complex> points) {
  const int n = static_cast<int>(points.size());
  if (n < 2) return 0.0;
  if (n > spectrum_.params.L) fail(Errc::Precondition, "chain order exceeds L");
  std::vector<Complex> base(points.begin(), points.end());
  const Complex ref = recurse(base, false);
  if (ref == Complex{0.0}) fail(Errc::Precondition, "F_n vanished at the sampled tuple");
  double worst = 0.0;
  for (int t = 0; t + 1 < n; ++t) {
    std::vector<Complex> swapped = base;
    std::swap(swapped[t], swapped[t + 1]);
    worst = std::max(worst, std::abs(recurse(swapped, false) - ref) / std::abs(ref));
  }
  return worst;
}

ChainRatio fL_vs_Z(const SpectrumTable& spectrum, ChainConfig config,
                   const std::vector<SpectralPoints>& batch) {
  if (batch.empty()) fail(Errc::Precondition, "empty batch");
  ChainRatio out;
  for (const SpectralPoints& points : batch) {
    ChainEvaluator chain(spectrum, config);
    const Complex fl = chain.eval_F(points.lambda);
    const Complex z = z_contract(spectrum.params, points).value;
    if (std::abs(z) < 1e-12 * std::max(1.0, std::abs(fl)))
      fail(Errc::Precondition, "Z near zero at a sampled point; resample");
    out.ratios.push_back(fl / z);
  }
  Complex sum = 0.0;
  for (const Complex& r : out.ratios) sum += r;
  out.mean = sum / static_cast<double>(out.ratios.size());
  for (const Complex& r : out.ratios)
    out.spread = std::max(out.spread, std::abs(r - out.mean) / std::abs(out.mean));
  return out;
}

}  // namespace sixvertex
