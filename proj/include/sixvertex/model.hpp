#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sixvertex/types.hpp"

namespace sixvertex {

inline constexpr double kDefaultSeparationTol = 1e-3;

/// Fixed data of the model: lattice length L, anisotropy gamma and the
/// inhomogeneities mu[0..L-1]. With strictSeparation on, construction rejects
/// inhomogeneity collisions (|sinh(mu_i - mu_j)| below separationTol).
struct ModelParams {
  int L = 0;
  Complex gamma{};
  std::vector<Complex> mu;
  bool strictSeparation = true;
  double separationTol = kDefaultSeparationTol;

  ModelParams(int L, Complex gamma, std::vector<Complex> mu, bool strictSeparation = true,
              double separationTol = kDefaultSeparationTol);
};

/// The L spectral parameters lambda[0..L-1].
struct SpectralPoints {
  std::vector<Complex> lambda;
};

/// Checks size and (in strict mode) pairwise separation of the lambdas.
void validate_points(const SpectralPoints& points, const ModelParams& params);

/// Smallest |sinh(z_i - z_j)| over pairs; +inf for fewer than two entries.
double min_separation(std::span<const Complex> values);

// Statistical weights. a and c absorb the anisotropy; b is the bare sinh.
inline Complex weight_a(Complex lambda, const ModelParams& p) { return std::sinh(lambda + p.gamma); }
inline Complex weight_b(Complex lambda) { return std::sinh(lambda); }
inline Complex weight_c(const ModelParams& p) { return std::sinh(p.gamma); }

/// Ground set a subset lives in: all indices 0..L-1 or the tail 1..L-1.
enum class GroundSet { Full, Tail };

/// A sorted tuple of removed indices inside a ground set. The complement is
/// the argument list of a multivariate function; rank/unrank give the
/// lexicographic position among equal-size subsets.
struct IndexSubset {
  GroundSet ground = GroundSet::Full;
  int L = 0;
  std::vector<int> removed;

  IndexSubset(GroundSet ground, int L, std::vector<int> removed);

  int groundBegin() const { return ground == GroundSet::Full ? 0 : 1; }
  int groundSize() const { return ground == GroundSet::Full ? L : L - 1; }
};

std::uint64_t binomial(int n, int k);

std::int64_t subset_rank(const IndexSubset& subset);
IndexSubset subset_unrank(GroundSet ground, int L, int size, std::int64_t rank);

/// Complement of `removed` in the ground set, as spectral values in
/// increasing source-index order.
std::vector<Complex> ordered_complement(const IndexSubset& subset, const SpectralPoints& points);

/// Complement as indices rather than values.
std::vector<int> complement_indices(const IndexSubset& subset);

}  // namespace sixvertex
