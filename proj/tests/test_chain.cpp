#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sixvertex/chain.hpp"
#include "sixvertex/kernels.hpp"
#include "sixvertex/oracle.hpp"
#include "sixvertex/spectral.hpp"
#include "support/test_oracles.hpp"

using namespace sixvertex;
using testsupport::rel;
using testsupport::sample_gamma;
using testsupport::sample_points;

TEST_CASE("low-order chain identities") {
  Rng rng(splitmix64(61));
  ModelParams p(3, sample_gamma(rng), sample_points(rng, 3));
  const SpectrumTable table = diagonalize_auto(p);
  const auto lam = sample_points(rng, 2);

  for (int branch : {0, 2, 5}) {
    const Complex f0{1.3, -0.4};
    ChainEvaluator chain(table, ChainConfig{branch, f0});
    CHECK(rel(chain.eval_F({}), f0) == 0.0);
    CHECK(rel(chain.eval_F(std::vector<Complex>{lam[0]}),
              eigenvalue_at(table, branch, lam[0]) * f0) < 1e-12);
    const Complex expect =
        (eigenvalue_at(table, branch, lam[0]) * eigenvalue_at(table, branch, lam[1]) -
         coeff_M(1, 1, KernelArgs{lam, p})) *
        f0;
    CHECK(rel(chain.eval_F(lam), expect) < 1e-12);
  }
}

TEST_CASE("F_2 is symmetric under the swap") {
  Rng rng(splitmix64(62));
  ModelParams p(3, sample_gamma(rng), sample_points(rng, 3));
  const SpectrumTable table = diagonalize_auto(p);
  ChainEvaluator chain(table, ChainConfig{1, Complex{1.0}}, /*canonicalize=*/false);
  const auto lam = sample_points(rng, 2);
  const std::vector<Complex> swapped{lam[1], lam[0]};
  CHECK(rel(chain.eval_F(lam), chain.eval_F(swapped)) < 1e-10);
}

TEST_CASE("symmetry residuals") {
  Rng rng(splitmix64(63));
  SUBCASE("n=2 at L=3") {
    ModelParams p(3, sample_gamma(rng), sample_points(rng, 3));
    const SpectrumTable table = diagonalize_auto(p);
    ChainEvaluator chain(table, ChainConfig{0, Complex{1.0}});
    CHECK(chain.symmetry_residual(sample_points(rng, 2)) < 1e-9);
  }
  SUBCASE("n=3 at L=4") {
    ModelParams p(4, sample_gamma(rng), sample_points(rng, 4));
    const SpectrumTable table = diagonalize_auto(p);
    ChainEvaluator chain(table, ChainConfig{0, Complex{1.0}});
    CHECK(chain.symmetry_residual(sample_points(rng, 3)) < 1e-8);
  }
  SUBCASE("n=1 is zero by convention") {
    ModelParams p(3, sample_gamma(rng), sample_points(rng, 3));
    const SpectrumTable table = diagonalize_auto(p);
    ChainEvaluator chain(table, ChainConfig{0, Complex{1.0}});
    CHECK(chain.symmetry_residual(sample_points(rng, 1)) == 0.0);
  }
  SUBCASE("all n <= L <= 5 across 20 random draws") {
    for (int draw = 0; draw < 20; ++draw) {
      for (int L = 2; L <= 5; ++L) {
        ModelParams p(L, sample_gamma(rng), sample_points(rng, L));
        const SpectrumTable table = diagonalize_auto(p);
        ChainEvaluator chain(table, ChainConfig{draw % table.branchCount(), Complex{1.0}});
        const auto lam = sample_points(rng, L);
        for (int n = 2; n <= L; ++n) {
          const std::vector<Complex> tuple(lam.begin(), lam.begin() + n);
          CHECK(chain.symmetry_residual(tuple) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("F_L is proportional to Z with ratio f0 / kappa0") {
  Rng rng(splitmix64(64));
  SUBCASE("L=3 at mu = 0: table kappa0 is a sign") {
    ModelParams p(3, sample_gamma(rng), {0.0, 0.0, 0.0}, false);
    const SpectrumTable table = diagonalize_auto(p);
    std::vector<SpectralPoints> batch;
    for (int t = 0; t < 10; ++t) batch.push_back(SpectralPoints{sample_points(rng, 3)});
    for (int k = 0; k < 8; ++k) {
      const ChainConfig cfg{k, Complex{1.0}};
      const ChainRatio r = fL_vs_Z(table, cfg, batch);
      CHECK(r.spread < 1e-8);
      const Complex k0 = kappa0(p, table, k);
      CHECK(std::abs(k0 * r.mean - cfg.f0) < 1e-8);
      CHECK(std::abs(std::abs(k0.real()) - 1.0) < 1e-9);
      CHECK(std::abs(k0.imag()) < 1e-9);
    }
  }
  SUBCASE("L=2 all branches") {
    ModelParams p(2, sample_gamma(rng), sample_points(rng, 2));
    const SpectrumTable table = diagonalize_auto(p);
    std::vector<SpectralPoints> batch;
    for (int t = 0; t < 6; ++t) batch.push_back(SpectralPoints{sample_points(rng, 2)});
    for (int k = 0; k < 4; ++k) {
      const ChainConfig cfg{k, Complex{1.0}};
      const ChainRatio r = fL_vs_Z(table, cfg, batch);
      CHECK(r.spread < 1e-9);
      CHECK(std::abs(kappa0(p, table, k) * r.mean - cfg.f0) < 1e-9);
    }
  }
  SUBCASE("scaling f0 scales the ratio linearly") {
    ModelParams p(3, sample_gamma(rng), sample_points(rng, 3));
    const SpectrumTable table = diagonalize_auto(p);
    std::vector<SpectralPoints> batch{SpectralPoints{sample_points(rng, 3)}};
    const ChainRatio one = fL_vs_Z(table, ChainConfig{0, Complex{1.0}}, batch);
    const ChainRatio two = fL_vs_Z(table, ChainConfig{0, Complex{2.0}}, batch);
    CHECK(rel(two.ratios[0], 2.0 * one.ratios[0]) < 1e-12);
  }
}

TEST_CASE("chain contract guards") {
  Rng rng(splitmix64(65));
  ModelParams p(3, sample_gamma(rng), sample_points(rng, 3));
  const SpectrumTable table = diagonalize_auto(p);
  CHECK_THROWS_AS(ChainEvaluator(table, ChainConfig{0, Complex{0.0}}), Error);
  CHECK_THROWS_AS(ChainEvaluator(table, ChainConfig{99, Complex{1.0}}), Error);
  ChainEvaluator chain(table, ChainConfig{0, Complex{1.0}});
  CHECK_THROWS_AS(chain.eval_F(sample_points(rng, 4)), Error);  // n > L
  const std::vector<Complex> colliding{Complex{0.2}, Complex{0.2 + 1e-9}};
  CHECK_THROWS_AS(chain.eval_F(colliding), Error);
}
