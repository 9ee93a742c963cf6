#include "sixvertex/selftest.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <sstream>
#include <vector>

#include "sixvertex/chain.hpp"
#include "sixvertex/closed_forms.hpp"
#include "sixvertex/kernels.hpp"
#include "sixvertex/oracle.hpp"
#include "sixvertex/report.hpp"
#include "sixvertex/spectral.hpp"
#include "sixvertex/transfer.hpp"

namespace sixvertex {

namespace {

double rel(Complex a, Complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

Complex sample_gamma(Rng& rng) { return rng.complexIn(0.2, 1.2, -0.5, 0.5); }

std::vector<Complex> sample_points(Rng& rng, int n) {
  while (true) {
    std::vector<Complex> out;
    for (int t = 0; t < n; ++t) out.push_back(rng.complexIn(-1.0, 1.0, -0.5, 0.5));
    if (min_separation(out) >= kDefaultSeparationTol) return out;
  }
}

// Literal transcription of the printed 4x4 matrix for L = 3.
Eigen::MatrixXcd z3_printed(const ModelParams& p, const SpectralPoints& pts,
                            const SpectrumTable& table, int branch) {
  const Complex l0 = pts.lambda[0], l1 = pts.lambda[1], l2 = pts.lambda[2];
  auto lam = [&](Complex x) { return eigenvalue_at(table, branch, x); };
  const std::vector<Complex> t12{l1, l2};
  const std::vector<Complex> t012{l0, l1, l2};
  const Complex m11 = coeff_M(1, 1, KernelArgs{t12, p});
  const Complex m12 = coeff_M(2, 1, KernelArgs{t012, p});
  const Complex m22 = coeff_M(2, 2, KernelArgs{t012, p});
  const Complex n21 = coeff_N(2, 2, 1, KernelArgs{t012, p});
  Eigen::MatrixXcd h(4, 4);
  h << lam(l2), -1, 0, 0,
       lam(l1), 0, -1, 0,
       lam(l0), 0, 0, -1,
       -m11 * lam(l0), lam(l0) * lam(l1) - m12, -m22, -n21;
  return h;
}

// Literal transcription of the printed 10x10 matrix for L = 4.
Eigen::MatrixXcd h4_printed(const ModelParams& p, const SpectralPoints& pts,
                            const SpectrumTable& table, int branch) {
  const Complex l0 = pts.lambda[0], l1 = pts.lambda[1], l2 = pts.lambda[2], l3 = pts.lambda[3];
  auto lam = [&](Complex x) { return eigenvalue_at(table, branch, x); };
  auto m1 = [&](Complex a, Complex b) {
    const std::vector<Complex> t{a, b};
    return coeff_M(1, 1, KernelArgs{t, p});
  };
  const std::vector<Complex> t123{l1, l2, l3};
  const std::vector<Complex> t0123{l0, l1, l2, l3};
  const Complex m12 = coeff_M(2, 1, KernelArgs{t123, p});
  const Complex m22 = coeff_M(2, 2, KernelArgs{t123, p});
  const Complex n212 = coeff_N(2, 2, 1, KernelArgs{t123, p});
  const Complex m13 = coeff_M(3, 1, KernelArgs{t0123, p});
  const Complex m23 = coeff_M(3, 2, KernelArgs{t0123, p});
  const Complex m33 = coeff_M(3, 3, KernelArgs{t0123, p});
  const Complex n213 = coeff_N(3, 2, 1, KernelArgs{t0123, p});
  const Complex n313 = coeff_N(3, 3, 1, KernelArgs{t0123, p});
  const Complex n323 = coeff_N(3, 3, 2, KernelArgs{t0123, p});
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(10, 10);
  h(0, 0) = lam(l3); h(0, 1) = -1;
  h(1, 0) = lam(l2); h(1, 2) = -1;
  h(2, 0) = lam(l1); h(2, 3) = -1;
  h(3, 0) = -m1(l2, l3); h(3, 1) = lam(l2); h(3, 4) = -1;
  h(4, 0) = -m1(l1, l3); h(4, 1) = lam(l1); h(4, 5) = -1;
  h(5, 0) = -m1(l1, l2); h(5, 2) = lam(l1); h(5, 6) = -1;
  h(6, 0) = -m1(l0, l3); h(6, 1) = lam(l0); h(6, 7) = -1;
  h(7, 0) = -m1(l0, l2); h(7, 2) = lam(l0); h(7, 8) = -1;
  h(8, 0) = -m1(l0, l1); h(8, 3) = lam(l0); h(8, 9) = -1;
  h(9, 1) = -lam(l0) * m12;
  h(9, 2) = -lam(l0) * m22;
  h(9, 3) = -lam(l0) * n212;
  h(9, 4) = lam(l0) * lam(l1) - m13;
  h(9, 5) = -m23;
  h(9, 6) = -m33;
  h(9, 7) = -n213;
  h(9, 8) = -n313;
  h(9, 9) = -n323;
  return h;
}

struct Checker {
  std::ostream& out;
  int failures = 0;

  void run(const std::string& name, const std::function<double()>& worstResidual,
           double tolerance) {
    double value = 0.0;
    std::string detail;
    bool ok = false;
    try {
      value = worstResidual();
      ok = value <= tolerance;
      std::ostringstream ss;
      ss << "max residual " << value << " (tol " << tolerance << ")";
      detail = ss.str();
    } catch (const std::exception& e) {
      detail = e.what();
    }
    out << (ok ? "[ok]   " : "[FAIL] ") << name << " — " << detail << "\n";
    if (!ok) ++failures;
  }
};

}  // namespace

int run_selftest(std::ostream& out, const SelftestOptions& options) {
  Checker check{out};
  Rng rng(splitmix64(options.seed));

  check.run("L2_closed_form_enumerate", [&] {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const Complex g = sample_gamma(rng);
      ModelParams p(2, g, sample_points(rng, 2));
      const auto lam = sample_points(rng, 2);
      Complex ref = z2_closed_form(p, lam[0], lam[1]);
      if (options.corruptL2Reference) ref = -ref;
      worst = std::max(worst, rel(z_enumerate(p, SpectralPoints{lam}).value, ref));
    }
    return worst;
  }, 1e-10);

  check.run("L3_closed_form_enumerate", [&] {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      ModelParams p(3, sample_gamma(rng), {0.0, 0.0, 0.0}, false);
      const auto lam = sample_points(rng, 3);
      worst = std::max(worst, rel(z_enumerate(p, SpectralPoints{lam}).value,
                                  z3_closed_form_homogeneous_mu(p, lam[0], lam[1], lam[2])));
    }
    return worst;
  }, 1e-10);

  check.run("diagonal_point_enumerate", [&] {
    double worst = 0.0;
    for (int L = 2; L <= 6; ++L) {
      ModelParams p(L, sample_gamma(rng), sample_points(rng, L));
      worst = std::max(worst, rel(z_enumerate(p, SpectralPoints{p.mu}).value,
                                  z_diagonal_point(p)));
    }
    return worst;
  }, 1e-10);

  check.run("diagonal_point_contract", [&] {
    double worst = 0.0;
    for (int L = 2; L <= 8; ++L) {
      ModelParams p(L, sample_gamma(rng), sample_points(rng, L));
      worst = std::max(worst, rel(z_contract(p, SpectralPoints{p.mu}).value,
                                  z_diagonal_point(p)));
    }
    return worst;
  }, 1e-10);

  check.run("izergin_L2_closed_form", [&] {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      ModelParams p(2, sample_gamma(rng), sample_points(rng, 2));
      const auto lam = sample_points(rng, 2);
      worst = std::max(worst, rel(z_izergin(p, SpectralPoints{lam}).value,
                                  z2_closed_form(p, lam[0], lam[1])));
    }
    return worst;
  }, 1e-10);

  check.run("izergin_diagonal_extrapolation", [&] {
    ModelParams p(3, sample_gamma(rng), sample_points(rng, 3));
    const Complex ref = z_diagonal_point(p);
    // polynomial extrapolation of the epsilon-offset values to epsilon = 0
    std::vector<double> eps{2e-2, 1e-2, 5e-3, 2.5e-3, 1.25e-3};
    std::vector<Complex> vals;
    for (double e : eps) {
      std::vector<Complex> lam = p.mu;
      for (auto& x : lam) x += e;
      vals.push_back(z_izergin(p, SpectralPoints{lam}).value);
    }
    for (std::size_t level = 1; level < vals.size(); ++level)
      for (std::size_t k = vals.size() - 1; k >= level; --k)
        vals[k] = vals[k] + (vals[k] - vals[k - 1]) * eps[k] / (eps[k - level] - eps[k]);
    return rel(vals.back(), ref);
  }, 1e-6);

  check.run("transfer_table1_spectrum", [&] {
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      ModelParams p(2, sample_gamma(rng), sample_points(rng, 2));
      const SpectrumTable table = diagonalize_auto(p);
      const auto forms = l2_spectrum_closed_form(p);
      std::vector<Complex> computed(table.eigenvalues.data(),
                                    table.eigenvalues.data() + table.branchCount());
      std::vector<Complex> refs;
      for (const auto& f : forms) refs.push_back(f.eigenvalue(table.referencePoint));
      const auto match = nearest_value_matching(computed, refs);
      for (int k = 0; k < 4; ++k) {
        for (int gpt = 0; gpt < 10; ++gpt) {
          const Complex lg = table.referencePoint + 0.11 * gpt + Complex{0, 0.013} * static_cast<double>(gpt);
          worst = std::max(worst, rel(eigenvalue_at(table, k, lg),
                                      forms[match[k]].eigenvalue(lg)));
        }
      }
    }
    return worst;
  }, 1e-9);

  check.run("transfer_table1_kappa0", [&] {
    double worst = 0.0;
    ModelParams p(2, sample_gamma(rng), sample_points(rng, 2));
    const SpectrumTable table = diagonalize_auto(p);
    const auto forms = l2_spectrum_closed_form(p);
    std::vector<Complex> computed(table.eigenvalues.data(), table.eigenvalues.data() + 4);
    std::vector<Complex> refs;
    for (const auto& f : forms) refs.push_back(f.eigenvalue(table.referencePoint));
    const auto match = nearest_value_matching(computed, refs);
    for (int k = 0; k < 4; ++k)
      worst = std::max(worst,
                       std::abs(kappa0(p, table, k) - Complex{forms[match[k]].kappa0Sign}));
    return worst;
  }, 1e-9);

  check.run("transfer_table2_spectrum", [&] {
    double worst = 0.0;
    for (int t = 0; t < 3; ++t) {
      ModelParams p(3, sample_gamma(rng), {0.0, 0.0, 0.0}, false);
      const SpectrumTable table = diagonalize_auto(p);
      const auto forms = l3_spectrum_closed_form_homogeneous_mu(p);
      std::vector<Complex> computed(table.eigenvalues.data(), table.eigenvalues.data() + 8);
      std::vector<Complex> refs;
      for (const auto& f : forms) refs.push_back(f.eigenvalue(table.referencePoint));
      const auto match = nearest_value_matching(computed, refs);
      for (int k = 0; k < 8; ++k)
        for (int gpt = 0; gpt < 5; ++gpt) {
          const Complex lg = table.referencePoint + 0.13 * gpt - Complex{0, 0.017} * static_cast<double>(gpt);
          worst = std::max(worst, rel(eigenvalue_at(table, k, lg),
                                      forms[match[k]].eigenvalue(lg)));
        }
    }
    return worst;
  }, 1e-9);

  check.run("transfer_table2_kappa0", [&] {
    double worst = 0.0;
    ModelParams p(3, sample_gamma(rng), {0.0, 0.0, 0.0}, false);
    const SpectrumTable table = diagonalize_auto(p);
    const auto forms = l3_spectrum_closed_form_homogeneous_mu(p);
    std::vector<Complex> computed(table.eigenvalues.data(), table.eigenvalues.data() + 8);
    std::vector<Complex> refs;
    for (const auto& f : forms) refs.push_back(f.eigenvalue(table.referencePoint));
    const auto match = nearest_value_matching(computed, refs);
    for (int k = 0; k < 8; ++k)
      worst = std::max(worst,
                       std::abs(kappa0(p, table, k) - Complex{forms[match[k]].kappa0Sign}));
    return worst;
  }, 1e-9);

  check.run("m1_simplified_L2", [&] {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      ModelParams p(2, sample_gamma(rng), sample_points(rng, 2));
      const auto lam = sample_points(rng, 2);
      worst = std::max(worst, rel(coeff_M(1, 1, KernelArgs{lam, p}),
                                  m1_closed_form_l2(p, lam[0], lam[1])));
    }
    return worst;
  }, 1e-12);

  check.run("z3_structural_matrix", [&] {
    ModelParams p(3, sample_gamma(rng), sample_points(rng, 3));
    const SpectralPoints pts{sample_points(rng, 3)};
    const SpectrumTable table = diagonalize_auto(p);
    double worst = 0.0;
    for (int k = 0; k < table.branchCount(); ++k) {
      const Eigen::MatrixXcd built = build_H(p, pts, table, k).entries;
      const Eigen::MatrixXcd ref = z3_printed(p, pts, table, k);
      worst = std::max(worst, (built - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff());
    }
    return worst;
  }, 1e-12);

  check.run("h4_structural_matrix", [&] {
    ModelParams p(4, sample_gamma(rng), sample_points(rng, 4));
    const SpectralPoints pts{sample_points(rng, 4)};
    const SpectrumTable table = diagonalize_auto(p);
    double worst = 0.0;
    for (int k = 0; k < table.branchCount(); k += 3) {
      const Eigen::MatrixXcd built = build_H(p, pts, table, k).entries;
      const Eigen::MatrixXcd ref = h4_printed(p, pts, table, k);
      worst = std::max(worst, (built - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff());
    }
    return worst;
  }, 1e-12);

  check.run("z_spectral_L2_all_branches", [&] {
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      ModelParams p(2, sample_gamma(rng), sample_points(rng, 2));
      const SpectralPoints pts{sample_points(rng, 2)};
      const SpectrumTable table = diagonalize_auto(p);
      const Complex ref = z_enumerate(p, pts).value;
      for (int k = 0; k < 4; ++k)
        worst = std::max(worst, rel(z_spectral(p, pts, table, k), ref));
    }
    return worst;
  }, 1e-9);

  check.run("z_spectral_L3_homogeneous_mu", [&] {
    ModelParams p(3, sample_gamma(rng), {0.0, 0.0, 0.0}, false);
    const SpectralPoints pts{sample_points(rng, 3)};
    const SpectrumTable table = diagonalize_auto(p);
    const Complex ref = z3_closed_form_homogeneous_mu(p, pts.lambda[0], pts.lambda[1],
                                                      pts.lambda[2]);
    double worst = 0.0;
    for (int k = 0; k < 8; ++k)
      worst = std::max(worst, rel(z_spectral(p, pts, table, k), ref));
    return worst;
  }, 1e-9);

  check.run("chain_low_order_identities", [&] {
    ModelParams p(3, sample_gamma(rng), sample_points(rng, 3));
    const SpectrumTable table = diagonalize_auto(p);
    const auto lam = sample_points(rng, 2);
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      ChainEvaluator chain(table, ChainConfig{k, Complex{1.0}});
      const Complex f1 = chain.eval_F(std::vector<Complex>{lam[0]});
      worst = std::max(worst, rel(f1, eigenvalue_at(table, k, lam[0])));
      const Complex f2 = chain.eval_F(lam);
      const Complex expect = eigenvalue_at(table, k, lam[0]) * eigenvalue_at(table, k, lam[1]) -
                             coeff_M(1, 1, KernelArgs{lam, p});
      worst = std::max(worst, rel(f2, expect));
    }
    return worst;
  }, 1e-10);

  check.run("chain_ratio_L2_table1", [&] {
    ModelParams p(2, sample_gamma(rng), sample_points(rng, 2));
    const SpectrumTable table = diagonalize_auto(p);
    std::vector<SpectralPoints> batch;
    for (int t = 0; t < 5; ++t) batch.push_back(SpectralPoints{sample_points(rng, 2)});
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) {
      const ChainConfig cfg{k, Complex{1.0}};
      const ChainRatio ratio = fL_vs_Z(table, cfg, batch);
      worst = std::max(worst, ratio.spread);
      worst = std::max(worst, std::abs(kappa0(p, table, k) * ratio.mean - cfg.f0));
    }
    return worst;
  }, 1e-8);

  check.run("chain_ratio_L3_table2", [&] {
    ModelParams p(3, sample_gamma(rng), {0.0, 0.0, 0.0}, false);
    const SpectrumTable table = diagonalize_auto(p);
    std::vector<SpectralPoints> batch;
    for (int t = 0; t < 10; ++t) batch.push_back(SpectralPoints{sample_points(rng, 3)});
    double worst = 0.0;
    for (int k = 0; k < 8; ++k) {
      const ChainConfig cfg{k, Complex{1.0}};
      const ChainRatio ratio = fL_vs_Z(table, cfg, batch);
      const Complex k0 = kappa0(p, table, k);
      worst = std::max(worst, ratio.spread);
      worst = std::max(worst, std::abs(k0 * ratio.mean - cfg.f0));
      // Table gives kappa0 = +-1 at mu_j = 0
      worst = std::max(worst, std::abs(std::abs(k0.real()) - 1.0) + std::abs(k0.imag()));
    }
    return worst;
  }, 1e-8);

  check.run("diagonalize_L2_branch_count", [&] {
    ModelParams p(2, sample_gamma(rng), sample_points(rng, 2));
    const SpectrumTable table = diagonalize_auto(p);
    if (table.branchCount() != 4) return 1.0;
    for (int k = 0; k < 4; ++k) {
      const Complex k0 = kappa0(p, table, k);
      if (!std::isfinite(k0.real()) || !std::isfinite(k0.imag())) return 1.0;
    }
    return 0.0;
  }, 0.5);

  out << (check.failures == 0 ? "selftest: all checks passed\n"
                              : "selftest: " + std::to_string(check.failures) + " failure(s)\n");
  return check.failures;
}

}  // namespace sixvertex
