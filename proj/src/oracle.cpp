#include "sixvertex/oracle.hpp"

#include <Eigen/Dense>

#include <array>
#include <bit>
#include <optional>
#include <vector>

#include "sixvertex/compensated.hpp"
#include "sixvertex/detutil.hpp"
#include "sixvertex/kernels.hpp"
#include "sixvertex/spectral.hpp"

namespace sixvertex {

namespace {

// Vertex lookup keyed on (west, north, south) edge states; horizontal edges
// store 1 for a right arrow, vertical edges 1 for an up arrow. A valid vertex
// determines the east edge and the weight kind; two of the eight keys break
// the ice rule.
enum class Kind : std::uint8_t { A, B, C, None };

struct VertexMove {
  int east;
  Kind kind;
};

constexpr std::array<VertexMove, 8> kVertexTable = [] {
  std::array<VertexMove, 8> t{};
  auto at = [&t](int w, int n, int s) -> VertexMove& { return t[w * 4 + n * 2 + s]; };
  for (auto& e : t) e = {0, Kind::None};
  at(1, 1, 1) = {1, Kind::A};
  at(0, 0, 0) = {0, Kind::A};
  at(1, 0, 0) = {1, Kind::B};
  at(0, 1, 1) = {0, Kind::B};
  at(1, 1, 0) = {0, Kind::C};
  at(0, 0, 1) = {1, Kind::C};
  return t;
}();

struct RowScan {
  Complex weight;
  bool admissible;
};

// One lattice row: top/bottom vertical masks fixed, west boundary arrow in,
// east boundary arrow must point in as well. Columns run left to right and
// carry the inhomogeneities in reverse order.
RowScan scan_row(int L, unsigned top, unsigned bottom, Complex lambdaRow,
                 const std::vector<Complex>& muCols, const ModelParams& p) {
  int west = 1;
  Complex w = 1.0;
  const Complex c = weight_c(p);
  for (int col = 0; col < L; ++col) {
    const int north = (top >> col) & 1;
    const int south = (bottom >> col) & 1;
    const VertexMove mv = kVertexTable[west * 4 + north * 2 + south];
    switch (mv.kind) {
      case Kind::A: w *= weight_a(lambdaRow - muCols[col], p); break;
      case Kind::B: w *= weight_b(lambdaRow - muCols[col]); break;
      case Kind::C: w *= c; break;
      case Kind::None: return {0.0, false};
    }
    west = mv.east;
  }
  return {w, west == 0};
}

std::vector<unsigned> masks_with_popcount(int L, int ones) {
  std::vector<unsigned> out;
  for (unsigned m = 0; m < (1u << L); ++m)
    if (std::popcount(m) == ones) out.push_back(m);
  return out;
}

// The four operator-valued monodromy blocks applied to a state vector,
// carried as the aux-indexed quartet X[a'][a].
struct BlockState {
  std::array<Eigen::VectorXcd, 4> v;  // index 2*a' + a
  Eigen::VectorXcd& at(int ap, int a) { return v[2 * ap + a]; }
};

void apply_site(BlockState& x, int site, Complex av, Complex bv, Complex cv) {
  const auto dim = x.v[0].size();
  const Eigen::Index bit = Eigen::Index(1) << site;
  BlockState next;
  for (auto& u : next.v) u = Eigen::VectorXcd::Zero(dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    const bool down = (s & bit) != 0;
    for (int a = 0; a < 2; ++a) {
      const Complex x0 = x.at(0, a)(s);
      const Complex x1 = x.at(1, a)(s);
      // diagonal blocks A = diag(a, b), D = diag(b, a) on the site spin
      next.at(0, a)(s) += (down ? bv : av) * x0;
      next.at(1, a)(s) += (down ? av : bv) * x1;
      // off-diagonal blocks B = c|down><up|, C = c|up><down|
      if (down)
        next.at(0, a)(s) += cv * x.at(1, a)(s ^ bit);
      else
        next.at(1, a)(s) += cv * x.at(0, a)(s ^ bit);
    }
  }
  x = std::move(next);
}

Eigen::VectorXcd apply_creation(const Eigen::VectorXcd& v, Complex lambda, const ModelParams& p) {
  BlockState x;
  x.at(0, 0) = v;
  x.at(1, 1) = v;
  x.at(0, 1) = Eigen::VectorXcd::Zero(v.size());
  x.at(1, 0) = Eigen::VectorXcd::Zero(v.size());
  const Complex cv = weight_c(p);
  for (int k = 0; k < p.L; ++k)
    apply_site(x, k, weight_a(lambda - p.mu[k], p), weight_b(lambda - p.mu[k]), cv);
  return x.at(0, 1);
}

void check_finite(Complex z, const char* who) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    fail(Errc::PoleProximity, std::string(who) + " produced a non-finite value");
}

}  // namespace

OracleResult z_enumerate(const ModelParams& params, const SpectralPoints& points) {
  if (params.L > kMaxEnumerateLength)
    fail(Errc::DimensionGuard,
         "z_enumerate limited to L <= " + std::to_string(kMaxEnumerateLength));
  validate_points(points, params);
  const int L = params.L;
  std::vector<Complex> muCols(params.mu.rbegin(), params.mu.rend());

  CostInfo cost;
  // amplitude and configuration-count DP over the vertical masks; the top
  // boundary is all arrows up, the bottom all arrows down
  std::vector<std::pair<unsigned, Complex>> states{{(1u << L) - 1u, Complex{1.0}}};
  std::vector<std::pair<unsigned, std::uint64_t>> counts{{(1u << L) - 1u, 1}};
  for (int r = 0; r < L; ++r) {
    const auto nextMasks = masks_with_popcount(L, L - r - 1);
    std::vector<std::pair<unsigned, Complex>> nextStates;
    std::vector<std::pair<unsigned, std::uint64_t>> nextCounts;
    for (std::size_t t = 0; t < nextMasks.size(); ++t) {
      Complex amp = 0.0;
      std::uint64_t n = 0;
      for (std::size_t s = 0; s < states.size(); ++s) {
        cost.flops += static_cast<std::uint64_t>(L);
        const RowScan scan =
            scan_row(L, states[s].first, nextMasks[t], points.lambda[r], muCols, params);
        if (!scan.admissible) continue;
        amp += states[s].second * scan.weight;
        n += counts[s].second;
      }
      nextStates.emplace_back(nextMasks[t], amp);
      nextCounts.emplace_back(nextMasks[t], n);
    }
    states = std::move(nextStates);
    counts = std::move(nextCounts);
  }
  cost.configurations = counts.front().second;
  check_finite(states.front().second, "z_enumerate");
  return {states.front().second, OracleMethod::Enumeration, cost};
}

OracleResult z_contract(const ModelParams& params, const SpectralPoints& points) {
  if (params.L > kMaxContractLength)
    fail(Errc::DimensionGuard, "z_contract limited to L <= " + std::to_string(kMaxContractLength));
  validate_points(points, params);
  const Eigen::Index dim = Eigen::Index(1) << params.L;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(0) = 1.0;  // all spins up
  CostInfo cost;
  for (const Complex& lambda : points.lambda) {
    v = apply_creation(v, lambda, params);
    cost.flops += static_cast<std::uint64_t>(dim) * params.L * 8;
  }
  const Complex z = v(dim - 1);  // all spins down
  check_finite(z, "z_contract");
  return {z, OracleMethod::Contraction, cost};
}

OracleResult z_izergin(const ModelParams& params, const SpectralPoints& points) {
  validate_points(points, params);
  const int L = params.L;
  constexpr double kSingular = 1e-13;

  Eigen::MatrixXcd m(L, L);
  DDComplex prefactor = DDComplex::from(Complex{1.0});
  const Complex c = weight_c(params);
  for (int i = 0; i < L; ++i) {
    for (int j = 0; j < L; ++j) {
      const Complex av = weight_a(points.lambda[i] - params.mu[j], params);
      const Complex bv = weight_b(points.lambda[i] - params.mu[j]);
      if (std::abs(av) < kSingular || std::abs(bv) < kSingular)
        fail(Errc::PoleProximity, "lambda_i - mu_j at a singular point of the determinant kernel");
      m(i, j) = ddc_div(DDComplex::from(c), ddc_mul(DDComplex::from(av), bv)).value();
      prefactor = ddc_mul(ddc_mul(prefactor, av), bv);
    }
  }
  DDComplex denom = DDComplex::from(Complex{1.0});
  for (int i = 0; i < L; ++i) {
    for (int j = i + 1; j < L; ++j) {
      const Complex dl = weight_b(points.lambda[i] - points.lambda[j]);
      const Complex dm = weight_b(params.mu[j] - params.mu[i]);
      if (std::abs(dl) < kSingular || std::abs(dm) < kSingular)
        fail(Errc::Separation, "coinciding spectral or inhomogeneity parameters");
      denom = ddc_mul(ddc_mul(denom, dl), dm);
    }
  }
  const ScaledDet det = lu_det_equilibrated(m);
  const Complex z = ddc_div(prefactor, denom).value() * det.det;
  check_finite(z, "z_izergin");
  CostInfo cost;
  cost.flops = static_cast<std::uint64_t>(L) * L * L;
  return {z, OracleMethod::Izergin, cost};
}

KorepinCheck korepin_check(const ModelParams& params, const SpectralPoints& points, int i, int j) {
  if (params.L < 2) fail(Errc::Precondition, "recurrence needs L >= 2");
  if (i < 0 || i >= params.L || j < 0 || j >= params.L)
    fail(Errc::IndexRange, "recurrence indices out of range");
  if (static_cast<int>(points.lambda.size()) != params.L)
    fail(Errc::Precondition, "expected L spectral points");
  const Complex special = params.mu[j] - params.gamma;
  if (std::abs(points.lambda[i] - special) > 1e-12 * (1.0 + std::abs(special)))
    fail(Errc::Precondition, "lambda_i is not specialized to mu_j - gamma");

  std::vector<Complex> muRest;
  for (int t = 0; t < params.L; ++t)
    if (t != j) muRest.push_back(params.mu[t]);
  std::vector<Complex> lamRest;
  for (int t = 0; t < params.L; ++t)
    if (t != i) lamRest.push_back(points.lambda[t]);
  ModelParams reduced(params.L - 1, params.gamma, muRest, params.strictSeparation,
                      params.separationTol);

  KorepinCheck out;
  out.zL = z_contract(params, points).value;
  out.zLminus1 = z_contract(reduced, SpectralPoints{lamRest}).value;

  const Complex c = weight_c(params);
  out.factorPinned = c;
  for (int t = 0; t < params.L; ++t)
    if (t != j) out.factorPinned *= weight_b(points.lambda[i] - params.mu[t]);
  for (int t = 0; t < params.L; ++t)
    if (t != i) out.factorPinned *= weight_b(points.lambda[t] - params.mu[j]);

  // literal double product over (l, m), evaluated for the report only
  out.factorPrinted = -c;
  for (int l = 0; l < params.L; ++l)
    for (int mIdx = 0; mIdx < params.L; ++mIdx)
      out.factorPrinted *= weight_b(points.lambda[l] - params.mu[i]) *
                           weight_b(points.lambda[mIdx] - params.mu[j]);

  const double scale = std::abs(out.zL);
  if (scale == 0.0) fail(Errc::Precondition, "Z_L vanished at the sampled point");
  out.residualPinned = std::abs(out.zL - out.factorPinned * out.zLminus1) / scale;
  out.residualPrinted = std::abs(out.zL - out.factorPrinted * out.zLminus1) / scale;
  return out;
}

double korepin_residual(const ModelParams& params, const SpectralPoints& points, int i, int j) {
  return korepin_check(params, points, i, j).residualPinned;
}

Complex homogeneous_z2(const ModelParams& params, Complex lambda, const SpectrumTable& spectrum,
                       int branch) {
  if (params.L != 2) fail(Errc::Precondition, "homogeneous_z2 requires L = 2");
  const Complex lam = eigenvalue_at(spectrum, branch, lambda);
  const Complex k0 = kappa0(params, spectrum, branch);
  return k0 * (lam * lam - m1_closed_form_l2(params, lambda, lambda));
}

}  // namespace sixvertex
