#include "sixvertex/model.hpp"

#include <algorithm>
#include <limits>

namespace sixvertex {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::Separation: return "SEPARATION";
    case Errc::PoleProximity: return "POLE_PROXIMITY";
    case Errc::DegenerateSpectrum: return "DEGENERATE_SPECTRUM";
    case Errc::EigenvalueZeroAtMu: return "EIGENVALUE_ZERO_AT_MU";
    case Errc::DimensionGuard: return "DIMENSION_GUARD";
    case Errc::Precondition: return "PRECONDITION";
    case Errc::IndexRange: return "INDEX_RANGE";
    case Errc::Config: return "CONFIG";
  }
  return "UNKNOWN";
}

double min_separation(std::span<const Complex> values) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      best = std::min(best, std::abs(std::sinh(values[i] - values[j])));
  return best;
}

ModelParams::ModelParams(int L_, Complex gamma_, std::vector<Complex> mu_, bool strict, double tol)
    : L(L_), gamma(gamma_), mu(std::move(mu_)), strictSeparation(strict), separationTol(tol) {
  if (L < 1) fail(Errc::Precondition, "lattice length must be >= 1");
  if (static_cast<int>(mu.size()) != L)
    fail(Errc::Precondition, "expected exactly L inhomogeneities, got " + std::to_string(mu.size()));
  if (strictSeparation && min_separation(mu) < separationTol)
    fail(Errc::Separation, "inhomogeneities closer than the separation tolerance");
}

void validate_points(const SpectralPoints& points, const ModelParams& params) {
  if (static_cast<int>(points.lambda.size()) != params.L)
    fail(Errc::Precondition,
         "expected " + std::to_string(params.L) + " spectral points, got " +
             std::to_string(points.lambda.size()));
  if (params.strictSeparation && min_separation(points.lambda) < params.separationTol)
    fail(Errc::Separation, "spectral points closer than the separation tolerance");
}

IndexSubset::IndexSubset(GroundSet ground_, int L_, std::vector<int> removed_)
    : ground(ground_), L(L_), removed(std::move(removed_)) {
  if (L < 1) fail(Errc::Precondition, "ground set needs L >= 1");
  int prev = groundBegin() - 1;
  for (int r : removed) {
    if (r <= prev) fail(Errc::IndexRange, "removed indices must be strictly increasing");
    if (r < groundBegin() || r >= L) fail(Errc::IndexRange, "removed index outside ground set");
    prev = r;
  }
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int t = 1; t <= k; ++t) result = result * static_cast<std::uint64_t>(n - k + t) / t;
  return result;
}

std::int64_t subset_rank(const IndexSubset& subset) {
  const int g = subset.groundSize();
  const int k = static_cast<int>(subset.removed.size());
  std::int64_t rank = 0;
  int prev = -1;
  for (int t = 0; t < k; ++t) {
    const int cur = subset.removed[t] - subset.groundBegin();
    for (int v = prev + 1; v < cur; ++v)
      rank += static_cast<std::int64_t>(binomial(g - 1 - v, k - 1 - t));
    prev = cur;
  }
  return rank;
}

IndexSubset subset_unrank(GroundSet ground, int L, int size, std::int64_t rank) {
  const int g = ground == GroundSet::Full ? L : L - 1;
  const int base = ground == GroundSet::Full ? 0 : 1;
  if (size < 0 || size > g) fail(Errc::IndexRange, "subset size out of range");
  if (rank < 0 || rank >= static_cast<std::int64_t>(binomial(g, size)))
    fail(Errc::IndexRange, "subset rank out of range");
  std::vector<int> removed;
  removed.reserve(size);
  int v = 0;
  for (int t = 0; t < size; ++t) {
    while (true) {
      const auto below = static_cast<std::int64_t>(binomial(g - 1 - v, size - 1 - t));
      if (rank < below) break;
      rank -= below;
      ++v;
    }
    removed.push_back(base + v);
    ++v;
  }
  return IndexSubset(ground, L, std::move(removed));
}

std::vector<int> complement_indices(const IndexSubset& subset) {
  std::vector<int> out;
  out.reserve(subset.groundSize() - subset.removed.size());
  std::size_t r = 0;
  for (int i = subset.groundBegin(); i < subset.L; ++i) {
    if (r < subset.removed.size() && subset.removed[r] == i) {
      ++r;
      continue;
    }
    out.push_back(i);
  }
  return out;
}

std::vector<Complex> ordered_complement(const IndexSubset& subset, const SpectralPoints& points) {
  if (static_cast<int>(points.lambda.size()) < subset.L)
    fail(Errc::IndexRange, "spectral point list shorter than the subset's ground set");
  std::vector<Complex> out;
  for (int i : complement_indices(subset)) out.push_back(points.lambda[i]);
  return out;
}

}  // namespace sixvertex
