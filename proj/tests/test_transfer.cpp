#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sixvertex/closed_forms.hpp"
#include "sixvertex/transfer.hpp"
#include "support/test_oracles.hpp"

using namespace sixvertex;
using testsupport::rel;
using testsupport::sample_gamma;
using testsupport::sample_points;

TEST_CASE("L=1 spectrum is {+c, -c} independent of lambda") {
  ModelParams p(1, Complex{0.37, 0.12}, {Complex{0.2, -0.1}});
  const Complex c = weight_c(p);
  for (Complex lam : {Complex{0.3, 0.2}, Complex{-0.8, 0.4}}) {
    const TransferMatrix t = build_transfer(p, lam);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(t.entries);
    std::vector<Complex> evs{es.eigenvalues()(0), es.eigenvalues()(1)};
    const auto match = nearest_value_matching(evs, {c, -c});
    CHECK(std::abs(evs[0] - (match[0] == 0 ? c : -c)) < 1e-14);
    CHECK(std::abs(evs[1] - (match[1] == 0 ? c : -c)) < 1e-14);
  }
  const SpectrumTable table = diagonalize_auto(p);
  CHECK(table.branchCount() == 2);
  CHECK(rel(table.eigenvalues(0), c) < 1e-13);
  CHECK(rel(table.eigenvalues(1), -c) < 1e-13);  // sorted by descending |.|, then re
}

TEST_CASE("L=2 spectrum matches the four closed forms") {
  Rng rng(splitmix64(21));
  for (int t = 0; t < 5; ++t) {
    ModelParams p(2, sample_gamma(rng), sample_points(rng, 2));
    const SpectrumTable table = diagonalize_auto(p);
    REQUIRE(table.branchCount() == 4);
    const auto forms = l2_spectrum_closed_form(p);
    std::vector<Complex> computed(table.eigenvalues.data(), table.eigenvalues.data() + 4);
    std::vector<Complex> refs;
    for (const auto& f : forms) refs.push_back(f.eigenvalue(table.referencePoint));
    const auto match = nearest_value_matching(computed, refs);
    for (int k = 0; k < 4; ++k) CHECK(rel(computed[k], refs[match[k]]) < 1e-9);
  }
}

TEST_CASE("L=2 eigenvalue_at follows the closed-form lambda dependence on a grid") {
  Rng rng(splitmix64(22));
  ModelParams p(2, sample_gamma(rng), sample_points(rng, 2));
  const SpectrumTable table = diagonalize_auto(p);
  const auto forms = l2_spectrum_closed_form(p);
  std::vector<Complex> computed(table.eigenvalues.data(), table.eigenvalues.data() + 4);
  std::vector<Complex> refs;
  for (const auto& f : forms) refs.push_back(f.eigenvalue(table.referencePoint));
  const auto match = nearest_value_matching(computed, refs);
  for (int k = 0; k < 4; ++k) {
    for (int g = 0; g < 10; ++g) {
      const Complex lam = Complex{-0.9, -0.3} + 0.17 * g + Complex{0, 0.06} * static_cast<double>(g);
      CHECK(rel(eigenvalue_at(table, k, lam), forms[match[k]].eigenvalue(lam)) < 1e-9);
    }
  }
}

TEST_CASE("L=3 homogeneous-mu spectrum matches the eight closed forms") {
  Rng rng(splitmix64(23));
  for (int t = 0; t < 3; ++t) {
    ModelParams p(3, sample_gamma(rng), {0.0, 0.0, 0.0}, false);
    const SpectrumTable table = diagonalize_auto(p);
    REQUIRE(table.branchCount() == 8);
    const auto forms = l3_spectrum_closed_form_homogeneous_mu(p);
    std::vector<Complex> computed(table.eigenvalues.data(), table.eigenvalues.data() + 8);
    std::vector<Complex> refs;
    for (const auto& f : forms) refs.push_back(f.eigenvalue(table.referencePoint));
    const auto match = nearest_value_matching(computed, refs);
    for (int k = 0; k < 8; ++k) CHECK(rel(computed[k], refs[match[k]]) < 1e-9);
  }
}

TEST_CASE("commutativity of transfer matrices") {
  Rng rng(splitmix64(24));
  for (int L = 1; L <= 4; ++L) {
    ModelParams p(L, sample_gamma(rng), sample_points(rng, L));
    const Complex l1 = rng.complexIn(-1, 1, -0.5, 0.5);
    const Complex l2 = rng.complexIn(-1, 1, -0.5, 0.5);
    const Eigen::MatrixXcd t1 = build_transfer(p, l1).entries;
    const Eigen::MatrixXcd t2 = build_transfer(p, l2).entries;
    const double comm = (t1 * t2 - t2 * t1).norm();
    CHECK(comm <= 1e-10 * t1.norm() * t2.norm());
  }
}

TEST_CASE("trace identity: sum of branch eigenvalues equals tr T(lambda)") {
  Rng rng(splitmix64(25));
  for (int L = 1; L <= 5; ++L) {
    ModelParams p(L, sample_gamma(rng), sample_points(rng, L));
    const SpectrumTable table = diagonalize_auto(p);
    for (int t = 0; t < 3; ++t) {
      const Complex lam = rng.complexIn(-1, 1, -0.5, 0.5);
      const Complex sum = eigenvalues_at(table, lam).sum();
      const Complex trace = build_transfer(p, lam).entries.trace();
      CHECK(std::abs(sum - trace) <=
            1e-9 * std::max(1.0, std::max(std::abs(sum), std::abs(trace))));
    }
  }
}

TEST_CASE("eigenvalue_at at the reference point reproduces the table") {
  Rng rng(splitmix64(26));
  ModelParams p(3, sample_gamma(rng), sample_points(rng, 3));
  const SpectrumTable table = diagonalize_auto(p);
  CHECK(table.referenceLeakage < 1e-9);
  const double spectrumNorm = table.eigenvalues.norm();
  for (int k = 0; k < table.branchCount(); ++k) {
    double leak = 0.0;
    CHECK(rel(eigenvalue_at(table, k, table.referencePoint, &leak), table.eigenvalues(k)) <
          1e-11);
    // leak is relative to the branch's own magnitude; normalize by the
    // spectrum so branches passing near zero do not inflate the diagnostic
    CHECK(leak * std::abs(table.eigenvalues(k)) / spectrumNorm < 1e-9);
  }
  CHECK_THROWS_AS(eigenvalue_at(table, 99, table.referencePoint), Error);
}

TEST_CASE("branch tracking is smooth: increments scale with the grid step") {
  Rng rng(splitmix64(27));
  ModelParams p(3, sample_gamma(rng), sample_points(rng, 3));
  const SpectrumTable table = diagonalize_auto(p);
  const Complex start{-1.0, -0.2};
  const Complex span{2.0, 0.4};

  auto max_increment = [&](int steps) {
    double sup = 0.0;
    Eigen::VectorXcd prev = eigenvalues_at(table, start);
    for (int s = 1; s <= steps; ++s) {
      const Eigen::VectorXcd cur =
          eigenvalues_at(table, start + span * (static_cast<double>(s) / steps));
      sup = std::max(sup, (cur - prev).cwiseAbs().maxCoeff());
      prev = cur;
    }
    return sup;
  };

  // a branch swap would keep an O(1) jump no matter how fine the grid;
  // smooth curves shrink their sup increment proportionally to the step
  const double coarse = max_increment(25);
  const double fine = max_increment(200);
  CHECK(fine <= coarse * (25.0 / 200.0) * 3.0);
  CHECK(fine > 0.0);
}

TEST_CASE("spectrum is closed under negation for L=2,3") {
  Rng rng(splitmix64(28));
  for (int L : {2, 3}) {
    ModelParams p(L, sample_gamma(rng), sample_points(rng, L));
    const SpectrumTable table = diagonalize_auto(p);
    std::vector<Complex> evs(table.eigenvalues.data(),
                             table.eigenvalues.data() + table.branchCount());
    std::vector<Complex> negated;
    for (const Complex& v : evs) negated.push_back(-v);
    const auto match = nearest_value_matching(evs, negated);
    const double scale = table.eigenvalues.cwiseAbs().maxCoeff();
    for (std::size_t k = 0; k < evs.size(); ++k)
      CHECK(std::abs(evs[k] - negated[match[k]]) < 1e-9 * scale);
  }
}

TEST_CASE("degenerate spectrum is refused") {
  // gamma = 0 kills the twist coupling scale and collapses all eigenvalues
  ModelParams p(2, Complex{0.0}, {Complex{0.1}, Complex{0.5}});
  CHECK_THROWS_AS(diagonalize(p, kDefaultReferencePoint), Error);
  try {
    diagonalize(p, kDefaultReferencePoint);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateSpectrum);
  }
  CHECK_THROWS_AS(diagonalize_auto(p), Error);
}

TEST_CASE("dense dimension guard") {
  std::vector<Complex> mu;
  for (int t = 0; t < 11; ++t) mu.push_back(Complex{0.05 * t});
  ModelParams p(11, Complex{0.5}, mu);
  CHECK_THROWS_AS(build_transfer(p, Complex{0.1}), Error);
}
