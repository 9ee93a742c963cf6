#include "sixvertex/spectral.hpp"

#include <algorithm>
#include <set>

#include "sixvertex/compensated.hpp"
#include "sixvertex/detutil.hpp"
#include "sixvertex/kernels.hpp"

namespace sixvertex {

namespace {

std::vector<std::vector<int>> lex_tuples(GroundSet ground, int L, int size) {
  const auto count = binomial(ground == GroundSet::Full ? L : L - 1, size);
  std::vector<std::vector<int>> out;
  out.reserve(count);
  for (std::uint64_t r = 0; r < count; ++r)
    out.push_back(subset_unrank(ground, L, size, static_cast<std::int64_t>(r)).removed);
  return out;
}

std::vector<int> set_minus(const std::vector<int>& s, std::initializer_list<int> drop) {
  std::vector<int> out;
  out.reserve(s.size());
  for (int v : s)
    if (std::find(drop.begin(), drop.end(), v) == drop.end()) out.push_back(v);
  return out;
}

// {m; k} = (L-k)! / ((m-k)! (L-m)!) = C(L-k, m-k), the identity-block sizes
// inside the Lambda column of block row m.
std::uint64_t w_block_size(int L, int m, int k) { return binomial(L - k, m - k); }

}  // namespace

// LU determinant after powers-of-two row/column equilibration. The entries of
// H span many orders of magnitude; exact binary scaling removes that spread
// before the factorization and is undone on the determinant. Full pivoting
// controls the element growth that partial pivoting suffers on this block
// structure (it costs determinant digits the acceptance gate needs). The
// value is accumulated as mantissa times 2^exponent so intermediate factors
// cannot overflow even when individual scales are extreme.
ScaledDet lu_det_equilibrated(Eigen::MatrixXcd h) {
  const int n = static_cast<int>(h.rows());
  std::int64_t exponent = 0;
  for (int pass = 0; pass < 3; ++pass) {
    for (int r = 0; r < n; ++r) {
      const double m = h.row(r).cwiseAbs().maxCoeff();
      if (m > 0 && std::isfinite(m)) {
        const int e = std::ilogb(m);
        h.row(r) *= std::exp2(-e);
        exponent += e;
      }
    }
    for (int c = 0; c < n; ++c) {
      const double m = h.col(c).cwiseAbs().maxCoeff();
      if (m > 0 && std::isfinite(m)) {
        const int e = std::ilogb(m);
        h.col(c) *= std::exp2(-e);
        exponent += e;
      }
    }
  }
  const auto lu = h.fullPivLu();
  const double rcond = lu.rcond();

  Complex mantissa{static_cast<double>(lu.permutationP().determinant() *
                                       lu.permutationQ().determinant())};
  for (int k = 0; k < n; ++k) {
    mantissa *= lu.matrixLU()(k, k);
    const double mag = std::abs(mantissa);
    if (mag > 0 && std::isfinite(mag)) {
      const int e = std::ilogb(mag);
      if (e > 64 || e < -64) {
        mantissa *= std::exp2(-e);
        exponent += e;
      }
    }
  }

  // First-order residual correction: with P h Q = LU + E the determinant is
  // det(LU) (1 + tr((LU)^-1 E) + O(|E|^2)). The factorization error E is of
  // order eps |h| and must be formed with compensated products to mean
  // anything; the correction removes the LU rounding from the determinant,
  // leaving only the sensitivity to the entries themselves.
  if (n <= 256 && rcond > 1e-15) {
    const Eigen::MatrixXcd& packed = lu.matrixLU();
    const Eigen::MatrixXcd phq = lu.permutationP() * h * lu.permutationQ();
    Eigen::MatrixXcd residual(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        CompensatedComplex acc;
        acc.addProduct(Complex{-1.0}, phq(r, c));
        const int kMax = std::min(r, c);
        for (int k = 0; k < kMax; ++k) acc.addProduct(packed(r, k), packed(k, c));
        if (r <= c)
          acc.add(packed(r, c));  // unit diagonal of L
        else
          acc.addProduct(packed(r, c), packed(c, c));
        residual(r, c) = -acc.value();
      }
    }
    packed.triangularView<Eigen::UnitLower>().solveInPlace(residual);
    packed.triangularView<Eigen::Upper>().solveInPlace(residual);
    const Complex trace = residual.trace();
    if (std::abs(trace) < 0.5) mantissa *= Complex{1.0} + trace;
  }

  ScaledDet out;
  out.det = mantissa * std::exp2(static_cast<double>(exponent));
  out.conditionEstimate = rcond > 0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  return out;
}

const LayoutLevel& VariableLayout::level(int m) const {
  for (const auto& lv : levels)
    if (lv.m == m) return lv;
  fail(Errc::IndexRange, "no level " + std::to_string(m) + " in layout");
}

int VariableLayout::columnOf(int m, const std::vector<int>& argumentSet) const {
  const LayoutLevel& lv = level(m);
  std::vector<int> removed;
  std::size_t a = 0;
  const int begin = lv.ground == GroundSet::Full ? 0 : 1;
  for (int v = begin; v < L; ++v) {
    if (a < argumentSet.size() && argumentSet[a] == v) {
      ++a;
      continue;
    }
    removed.push_back(v);
  }
  if (a != argumentSet.size())
    fail(Errc::IndexRange, "argument set not contained in the level's ground set");
  return lv.offset +
         static_cast<int>(subset_rank(IndexSubset(lv.ground, L, std::move(removed))));
}

VariableLayout build_layout(int L) {
  if (L < 3) fail(Errc::Precondition, "block layout needs L >= 3; L = 2 has its own formula");
  VariableLayout layout;
  layout.L = L;
  int offset = 0;
  for (int m = L; m >= 2; --m) {
    LayoutLevel lv;
    lv.m = m;
    lv.ground = (m % 2 == 0) ? GroundSet::Full : GroundSet::Tail;
    lv.removedSize = (m % 2 == 0) ? m : m - 1;
    lv.offset = offset;
    lv.removed = lex_tuples(lv.ground, L, lv.removedSize);
    for (const auto& r : lv.removed)
      lv.args.push_back(complement_indices(IndexSubset(lv.ground, L, r)));
    offset += static_cast<int>(lv.removed.size());
    layout.levels.push_back(std::move(lv));
  }
  layout.total = offset;
  const int expected = 3 * (1 << (L - 2)) - 2;
  if (layout.total != expected)
    fail(Errc::Precondition, "layout size " + std::to_string(layout.total) +
                                 " does not match 3*2^(L-2)-2 = " + std::to_string(expected));
  return layout;
}

HBuilder::HBuilder(const ModelParams& params, const SpectralPoints& points,
                   const SpectrumTable& spectrum)
    : layout_(build_layout(params.L)) {
  validate_points(points, params);
  if (spectrum.params.L != params.L)
    fail(Errc::Precondition, "spectrum table built for a different lattice length");

  const int branches = spectrum.branchCount();
  refEigs_ = spectrum.eigenvalues;
  eigsAtPoints_.resize(branches, params.L);
  for (int j = 0; j < params.L; ++j)
    eigsAtPoints_.col(j) = eigenvalues_at(spectrum, points.lambda[j]);
  eigsAtMu_.resize(branches, params.L);
  for (int i = 0; i < params.L; ++i)
    eigsAtMu_.col(i) = eigenvalues_at(spectrum, params.mu[i]);

  kappaNumerator_ = std::pow(weight_c(params), params.L);
  for (int i = 0; i < params.L; ++i)
    for (int j = i + 1; j < params.L; ++j)
      kappaNumerator_ *= weight_a(params.mu[i] - params.mu[j], params) *
                         weight_a(params.mu[j] - params.mu[i], params);

  assemble_stamps(params, points);
  verify_block_structure();
}

void HBuilder::assemble_stamps(const ModelParams& params, const SpectralPoints& points) {
  const int L = params.L;
  const auto& lam = points.lambda;
  int row = 0;

  // Block rows m = L..3: one row per level-(m-1) variable with argument set S,
  // encoding the order-n functional equation (n = L - m) with the smallest
  // index of S in the lambda_0 role.
  for (int m = L; m >= 3; --m) {
    const LayoutLevel& below = layout_.level(m - 1);
    const int n = L - m;
    for (const auto& S : below.args) {
      const int s0 = S[0];
      stamps_.push_back({row, layout_.columnOf(m, set_minus(S, {s0})), Complex{0.0}, Complex{1.0},
                         s0, false});
      stamps_.push_back({row, layout_.columnOf(m - 1, S), Complex{-1.0}, Complex{0.0}, -1, false});
      if (n >= 1) {
        std::vector<Complex> tuple;
        tuple.reserve(S.size());
        for (int idx : S) tuple.push_back(lam[idx]);
        const KernelArgs args{tuple, params};
        for (int i = 1; i <= n; ++i)
          stamps_.push_back({row, layout_.columnOf(m + 1, set_minus(S, {s0, S[i]})),
                             -coeff_M(n, i, args), Complex{0.0}, -1, false});
        for (int i = 1; i <= n; ++i)
          for (int j = i + 1; j <= n; ++j)
            stamps_.push_back({row, layout_.columnOf(m + 1, set_minus(S, {S[i], S[j]})),
                               -coeff_N(n, j, i, args), Complex{0.0}, -1, false});
      }
      ++row;
    }
  }

  // Final row: order-(L-1) equation with its F_{L-1} term eliminated through
  // the order-(L-2) equation at shifted arguments.
  {
    std::vector<Complex> full(lam.begin(), lam.end());
    std::vector<Complex> tail(lam.begin() + 1, lam.end());
    const KernelArgs fullArgs{full, params};
    const KernelArgs tailArgs{tail, params};

    std::vector<int> allIdx(L);
    for (int t = 0; t < L; ++t) allIdx[t] = t;

    for (int i = 1; i <= L - 1; ++i) {
      const Complex mi = coeff_M(L - 1, i, fullArgs);
      stamps_.push_back({row, layout_.columnOf(2, set_minus(allIdx, {0, i})), -mi, Complex{0.0},
                         -1, i == 1});
    }
    for (int i = 1; i <= L - 1; ++i)
      for (int j = i + 1; j <= L - 1; ++j)
        stamps_.push_back({row, layout_.columnOf(2, set_minus(allIdx, {i, j})),
                           -coeff_N(L - 1, j, i, fullArgs), Complex{0.0}, -1, false});

    std::vector<int> tailIdx(L - 1);
    for (int t = 0; t < L - 1; ++t) tailIdx[t] = t + 1;
    for (int i = 1; i <= L - 2; ++i)
      stamps_.push_back({row, layout_.columnOf(3, set_minus(tailIdx, {1, i + 1})), Complex{0.0},
                         -coeff_M(L - 2, i, tailArgs), 0, false});
    for (int i = 1; i <= L - 2; ++i)
      for (int j = i + 1; j <= L - 2; ++j)
        stamps_.push_back({row, layout_.columnOf(3, set_minus(tailIdx, {i + 1, j + 1})),
                           Complex{0.0}, -coeff_N(L - 2, j, i, tailArgs), 0, false});
    ++row;
  }

  if (row != layout_.total)
    fail(Errc::Precondition, "assembled " + std::to_string(row) + " rows for a " +
                                 std::to_string(layout_.total) + "-variable system");
}

void HBuilder::verify_block_structure() const {
  const int L = layout_.L;

  // no overlapping stamps
  std::set<std::pair<int, int>> seen;
  for (const auto& st : stamps_)
    if (!seen.insert({st.row, st.col}).second)
      fail(Errc::Precondition, "duplicate matrix stamp during assembly");

  int rowBase = 0;
  for (int m = L; m >= 3; --m) {
    const LayoutLevel& below = layout_.level(m - 1);
    const LayoutLevel& here = layout_.level(m);
    const int rows = static_cast<int>(below.args.size());

    // A_+ block: -1 on the variable's own column, identity-aligned
    for (int t = 0; t < rows; ++t) {
      bool found = false;
      for (const auto& st : stamps_)
        if (st.row == rowBase + t && st.col == below.offset + t && st.lambdaIndex == -1 &&
            st.constant == Complex{-1.0})
          found = true;
      if (!found) fail(Errc::Precondition, "A_+ block is not a negative identity");
    }

    // Lambda column: stacked identity blocks of size {m; k}, k = s0 + 1,
    // appearing in descending k, each left-aligned at the level's first column
    int t = 0;
    int prevS0 = layout_.L;
    while (t < rows) {
      const int s0 = below.args[t][0];
      if (s0 >= prevS0) fail(Errc::Precondition, "W-blocks not in descending order");
      prevS0 = s0;
      const int k = s0 + 1;
      const auto size = static_cast<int>(w_block_size(L, m, k));
      for (int q = 0; q < size; ++q, ++t) {
        if (t >= rows || below.args[t][0] != s0)
          fail(Errc::Precondition, "W-block grouping does not match {m;k}");
        bool found = false;
        for (const auto& st : stamps_)
          if (st.row == rowBase + t && st.col == here.offset + q && st.lambdaIndex == s0 &&
              st.lambdaCoeff == Complex{1.0})
            found = true;
        if (!found) fail(Errc::Precondition, "Lambda stamp misplaced in W-block");
      }
    }
    rowBase += rows;
  }

  // tridiagonal block profile: a stamp in block row m touches levels m-1..m+1
  rowBase = 0;
  auto levelOfCol = [this](int col) {
    for (const auto& lv : layout_.levels)
      if (col >= lv.offset && col < lv.offset + static_cast<int>(lv.removed.size())) return lv.m;
    fail(Errc::IndexRange, "column outside layout");
  };
  for (int m = L; m >= 3; --m) {
    const int rows = static_cast<int>(layout_.level(m - 1).args.size());
    for (const auto& st : stamps_) {
      if (st.row < rowBase || st.row >= rowBase + rows) continue;
      const int lv = levelOfCol(st.col);
      if (lv < m - 1 || lv > m + 1)
        fail(Errc::Precondition, "stamp outside the tridiagonal block profile");
    }
    rowBase += rows;
  }
}

HMatrix HBuilder::build(int branch) const {
  if (branch < 0 || branch >= branchCount()) fail(Errc::IndexRange, "branch out of range");
  HMatrix h;
  h.branch = branch;
  h.layout = layout_;
  h.entries = Eigen::MatrixXcd::Zero(layout_.total, layout_.total);
  const Complex l0l1 = eigsAtPoints_(branch, 0) * eigsAtPoints_(branch, 1);
  for (const auto& st : stamps_) {
    Complex v = st.constant;
    if (st.lambdaIndex >= 0) v += st.lambdaCoeff * eigsAtPoints_(branch, st.lambdaIndex);
    if (st.lambda01) v += l0l1;
    h.entries(st.row, st.col) += v;
  }
  h.conditionEstimate = lu_det_equilibrated(h.entries).conditionEstimate;
  return h;
}

Complex HBuilder::kappa0(int branch) const {
  if (branch < 0 || branch >= branchCount()) fail(Errc::IndexRange, "branch out of range");
  Complex denom = 1.0;
  for (int i = 0; i < eigsAtMu_.cols(); ++i) {
    const Complex v = eigsAtMu_(branch, i);
    // the branch's own magnitude at the reference point sets the zero scale
    if (std::abs(v) < 1e-12 * std::abs(refEigs_(branch)))
      fail(Errc::EigenvalueZeroAtMu, "branch eigenvalue vanishes at mu_" + std::to_string(i));
    denom *= v;
  }
  return kappaNumerator_ / denom;
}

Complex HBuilder::zValue(int branch, double* conditionEstimate) const {
  const HMatrix h = build(branch);
  const ScaledDet d = lu_det_equilibrated(h.entries);
  if (conditionEstimate) *conditionEstimate = d.conditionEstimate;
  return kappa0(branch) * d.det;
}

HMatrix build_H(const ModelParams& params, const SpectralPoints& points,
                const SpectrumTable& spectrum, int branch) {
  return HBuilder(params, points, spectrum).build(branch);
}

Complex kappa0(const ModelParams& params, const SpectrumTable& spectrum, int branch) {
  if (branch < 0 || branch >= spectrum.branchCount()) fail(Errc::IndexRange, "branch out of range");
  Complex num = std::pow(weight_c(params), params.L);
  for (int i = 0; i < params.L; ++i)
    for (int j = i + 1; j < params.L; ++j)
      num *= weight_a(params.mu[i] - params.mu[j], params) *
             weight_a(params.mu[j] - params.mu[i], params);
  Complex denom = 1.0;
  for (int i = 0; i < params.L; ++i) {
    const Complex v = eigenvalue_at(spectrum, branch, params.mu[i]);
    if (std::abs(v) < 1e-12 * std::abs(spectrum.eigenvalues(branch)))
      fail(Errc::EigenvalueZeroAtMu, "branch eigenvalue vanishes at mu_" + std::to_string(i));
    denom *= v;
  }
  return num / denom;
}

Complex z_spectral(const ModelParams& params, const SpectralPoints& points,
                   const SpectrumTable& spectrum, int branch) {
  if (params.L < 2) fail(Errc::Precondition, "z_spectral needs L >= 2");
  validate_points(points, params);
  if (params.L == 2) {
    // two-by-two representation; the block form starts at L = 3
    const std::vector<Complex> tuple{points.lambda[0], points.lambda[1]};
    const Complex m11 = coeff_M(1, 1, KernelArgs{tuple, params});
    const Complex l0 = eigenvalue_at(spectrum, branch, points.lambda[0]);
    const Complex l1 = eigenvalue_at(spectrum, branch, points.lambda[1]);
    return kappa0(params, spectrum, branch) * (l1 * l0 - m11);
  }
  return HBuilder(params, points, spectrum).zValue(branch);
}

Eigen::VectorXcd z_spectral_all_branches(const ModelParams& params, const SpectralPoints& points,
                                         const SpectrumTable& spectrum) {
  if (params.L < 2) fail(Errc::Precondition, "z_spectral needs L >= 2");
  const int branches = spectrum.branchCount();
  Eigen::VectorXcd out(branches);
  if (params.L == 2) {
    for (int k = 0; k < branches; ++k) out(k) = z_spectral(params, points, spectrum, k);
    return out;
  }
  HBuilder builder(params, points, spectrum);
  for (int k = 0; k < branches; ++k) out(k) = builder.zValue(k);
  return out;
}

std::vector<BranchZ> z_spectral_report(const ModelParams& params, const SpectralPoints& points,
                                       const SpectrumTable& spectrum) {
  if (params.L < 2) fail(Errc::Precondition, "z_spectral needs L >= 2");
  validate_points(points, params);
  std::vector<BranchZ> out;
  const int branches = spectrum.branchCount();
  if (params.L == 2) {
    const std::vector<Complex> tuple{points.lambda[0], points.lambda[1]};
    const Complex m11 = coeff_M(1, 1, KernelArgs{tuple, params});
    for (int k = 0; k < branches; ++k) {
      Eigen::Matrix2cd h;
      h << eigenvalue_at(spectrum, k, points.lambda[1]), Complex{1.0}, m11,
          eigenvalue_at(spectrum, k, points.lambda[0]);
      const auto lu = h.partialPivLu();
      const double rcond = lu.rcond();
      BranchZ b;
      b.branch = k;
      b.kappa0 = kappa0(params, spectrum, k);
      b.detH = lu.determinant();
      b.z = b.kappa0 * b.detH;
      b.conditionEstimate = rcond > 0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
      out.push_back(b);
    }
    return out;
  }
  HBuilder builder(params, points, spectrum);
  for (int k = 0; k < branches; ++k) {
    const HMatrix h = builder.build(k);
    const ScaledDet d = lu_det_equilibrated(h.entries);
    BranchZ b;
    b.branch = k;
    b.kappa0 = builder.kappa0(k);
    b.detH = d.det;
    b.z = b.kappa0 * b.detH;
    b.conditionEstimate = d.conditionEstimate;
    out.push_back(b);
  }
  return out;
}

double branch_invariance(const ModelParams& params, const SpectralPoints& points,
                         const SpectrumTable& spectrum) {
  const Eigen::VectorXcd z = z_spectral_all_branches(params, points, spectrum);
  if (z.size() < 2) return 0.0;
  std::vector<double> mags(z.size());
  for (int k = 0; k < z.size(); ++k) mags[k] = std::abs(z(k));
  std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
  const double median = mags[mags.size() / 2];
  if (median == 0.0) fail(Errc::Precondition, "all branch values vanish");
  double worst = 0.0;
  for (int a = 0; a < z.size(); ++a)
    for (int b = a + 1; b < z.size(); ++b)
      worst = std::max(worst, std::abs(z(a) - z(b)) / median);
  return worst;
}

}  // namespace sixvertex
