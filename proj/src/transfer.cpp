#include "sixvertex/transfer.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <numeric>

#include "sixvertex/compensated.hpp"

namespace sixvertex {

namespace {

using Mat = Eigen::MatrixXcd;

struct MonodromyBlocks {
  Mat A, B, C, D;  // operator-valued 2x2 in the auxiliary space
};

// One operator block carried as an unevaluated hi + lo matrix pair; the
// determinant identity downstream is sensitive to the transfer matrix's last
// digits, so the level products are kept at ~1 ulp.
struct DDBlock {
  Mat hi, lo;

  static DDBlock zero(Eigen::Index n) { return {Mat::Zero(n, n), Mat::Zero(n, n)}; }
  static DDBlock identity(Eigen::Index n) { return {Mat::Identity(n, n), Mat::Zero(n, n)}; }
  Eigen::Index size() const { return hi.rows(); }
  DDComplex at(Eigen::Index r, Eigen::Index c) const {
    return {{hi(r, c).real(), lo(r, c).real()}, {hi(r, c).imag(), lo(r, c).imag()}};
  }
  void set(Eigen::Index r, Eigen::Index c, const DDComplex& v) {
    hi(r, c) = {v.re.hi, v.im.hi};
    lo(r, c) = {v.re.lo, v.im.lo};
  }
};

// Monodromy R_{0L}...R_{01} built up one site at a time; site k enters as the
// leading Kronecker factor. With R = [[A_k, B_k], [C_k, D_k]] in the site
// basis (up, down): A_k = diag(a, b), B_k = c |down><up|, C_k = c |up><down|,
// D_k = diag(b, a). The two Kronecker summands of each new block land in
// disjoint site-bit quadrants, so a level is just scaled copies:
//   A' = [[a A, 0], [c C, b A]]   B' = [[a B, 0], [c D, b B]]
//   C' = [[b C, c A], [0, a C]]   D' = [[b D, c B], [0, a D]]
MonodromyBlocks build_monodromy(const ModelParams& p, Complex lambda) {
  DDBlock A = DDBlock::identity(1), B = DDBlock::zero(1), C = DDBlock::zero(1),
          D = DDBlock::identity(1);
  for (int k = 0; k < p.L; ++k) {
    const Complex av = weight_a(lambda - p.mu[k], p);
    const Complex bv = weight_b(lambda - p.mu[k]);
    const Complex cv = weight_c(p);
    const auto n = A.size();
    auto quadrants = [&](Complex tl, const DDBlock& xtl, Complex tr, const DDBlock& xtr,
                         Complex bl, const DDBlock& xbl, Complex br, const DDBlock& xbr) {
      DDBlock out = DDBlock::zero(2 * n);
      for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
          out.set(r, c, ddc_mul(xtl.at(r, c), tl));
          out.set(r, n + c, ddc_mul(xtr.at(r, c), tr));
          out.set(n + r, c, ddc_mul(xbl.at(r, c), bl));
          out.set(n + r, n + c, ddc_mul(xbr.at(r, c), br));
        }
      }
      return out;
    };
    DDBlock zeroN = DDBlock::zero(n);
    DDBlock nA = quadrants(av, A, Complex{0.0}, zeroN, cv, C, bv, A);
    DDBlock nB = quadrants(av, B, Complex{0.0}, zeroN, cv, D, bv, B);
    DDBlock nC = quadrants(bv, C, cv, A, Complex{0.0}, zeroN, av, C);
    DDBlock nD = quadrants(bv, D, cv, B, Complex{0.0}, zeroN, av, D);
    A = std::move(nA);
    B = std::move(nB);
    C = std::move(nC);
    D = std::move(nD);
  }
  MonodromyBlocks m;
  m.A = A.hi + A.lo;
  m.B = B.hi + B.lo;
  m.C = C.hi + C.lo;
  m.D = D.hi + D.lo;
  return m;
}

double offdiagonal_leakage(const Mat& d) {
  const double diag = d.diagonal().norm();
  Mat off = d;
  off.diagonal().setZero();
  return diag > 0 ? off.norm() / diag : off.norm();
}

// Branch eigenvalues are diagonal entries w_k T(lambda) v_k whose value can
// sit many orders below |T|; plain accumulation would leave them with
// absolute error ~ eps |T| |v|, i.e. a relative error amplified by
// |T| / |Lambda_k|. Compensated products remove that amplifier while staying
// in double precision.

// y = T v with componentwise compensated accumulation
Eigen::VectorXcd compensated_matvec(const Mat& t, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd y(t.rows());
  for (Eigen::Index r = 0; r < t.rows(); ++r) {
    CompensatedComplex acc;
    for (Eigen::Index c = 0; c < t.cols(); ++c) acc.addProduct(t(r, c), v(c));
    y(r) = acc.value();
  }
  return y;
}

Complex compensated_row_dot(const Mat& m, Eigen::Index row, const Eigen::VectorXcd& v) {
  CompensatedComplex acc;
  for (Eigen::Index c = 0; c < m.cols(); ++c) acc.addProduct(m(row, c), v(c));
  return acc.value();
}

Mat compensated_product(const Mat& a, const Mat& b) {
  Mat out(a.rows(), b.cols());
  for (Eigen::Index c = 0; c < b.cols(); ++c) {
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      CompensatedComplex acc;
      for (Eigen::Index k = 0; k < a.cols(); ++k) acc.addProduct(a(r, k), b(k, c));
      out(r, c) = acc.value();
    }
  }
  return out;
}

// Newton polish of the joint eigenbasis: with D = V^-1 T V nearly diagonal,
// the update V <- V (1 + E), E_ij = D_ij / (D_jj - D_ii), removes the
// off-diagonal mixing to second order. The eigensolver's vectors carry
// mixing ~ eps |T| / gap which this drives down to roundoff; every later
// branch evaluation inherits the improvement.
void polish_eigenbasis(const Mat& t, Mat& V, Mat& Vinv, Eigen::VectorXcd& evs) {
  const auto n = V.rows();
  if (n > 256) return;  // polish cost is cubic with a large constant
  for (int iter = 0; iter < 3; ++iter) {
    const Mat d = compensated_product(Vinv, compensated_product(t, V));
    evs = d.diagonal();
    Mat e = Mat::Zero(n, n);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        e(i, j) = d(i, j) / (d(j, j) - d(i, i));
        worst = std::max(worst, std::abs(e(i, j)));
      }
    }
    if (worst < 1e-14) break;
    V += V * e;
    Vinv = V.partialPivLu().inverse();
  }
}

}  // namespace

TransferMatrix build_transfer(const ModelParams& params, Complex lambda) {
  if (params.L > kMaxDenseLength)
    fail(Errc::DimensionGuard, "dense transfer matrix limited to L <= " +
                                   std::to_string(kMaxDenseLength));
  MonodromyBlocks m = build_monodromy(params, lambda);
  // Twisted trace with the off-diagonal flip: tr_0(G M) = B + C.
  return TransferMatrix{params.L, lambda, m.B + m.C};
}

SpectrumTable diagonalize(const ModelParams& params, Complex referencePoint) {
  TransferMatrix t = build_transfer(params, referencePoint);
  Eigen::ComplexEigenSolver<Mat> solver(t.entries);
  if (solver.info() != Eigen::Success)
    fail(Errc::DegenerateSpectrum, "eigensolver failed to converge");

  Mat V = solver.eigenvectors();
  Eigen::VectorXcd evs = solver.eigenvalues();

  Eigen::BDCSVD<Mat> svd(V);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1)
                                            : std::numeric_limits<double>::infinity();
  if (!(cond < kConditionLimit))
    fail(Errc::DegenerateSpectrum,
         "eigenvector matrix condition " + std::to_string(cond) + " exceeds limit");

  // Deterministic branch order: descending |Lambda|, then re, then im.
  std::vector<int> order(evs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ma = std::abs(evs(a)), mb = std::abs(evs(b));
    if (ma != mb) return ma > mb;
    if (evs(a).real() != evs(b).real()) return evs(a).real() > evs(b).real();
    return evs(a).imag() > evs(b).imag();
  });
  Mat Vs(V.rows(), V.cols());
  Eigen::VectorXcd es(evs.size());
  for (int k = 0; k < static_cast<int>(order.size()); ++k) {
    Vs.col(k) = V.col(order[k]);
    es(k) = evs(order[k]);
  }

  // Branch identity needs separated eigenvalues at the reference point; a
  // collapsed spectrum (e.g. gamma = 0, where the twist coupling c vanishes)
  // leaves the eigenbasis arbitrary. The gap floor also bounds the
  // eigenvector error ~ eps * |T| / gap, which every later branch
  // evaluation inherits, so near-crossings at the reference point are
  // rejected and the caller shifts to a point where the branches separate.
  const double scale = es.cwiseAbs().maxCoeff();
  if (!(scale > 1e-14))
    fail(Errc::DegenerateSpectrum, "transfer spectrum collapsed to zero");
  for (int a = 0; a < es.size(); ++a)
    for (int b = a + 1; b < es.size(); ++b)
      if (std::abs(es(a) - es(b)) < 1e-6 * scale)
        fail(Errc::DegenerateSpectrum,
             "near-coinciding eigenvalues at the reference point; re-sample the point");

  SpectrumTable table{params, referencePoint, std::move(es), std::move(Vs), Mat(), cond, 0.0};
  table.Vinv = table.V.partialPivLu().inverse();
  polish_eigenbasis(t.entries, table.V, table.Vinv, table.eigenvalues);

  const Mat d = table.V.rows() <= 256
                    ? compensated_product(table.Vinv, compensated_product(t.entries, table.V))
                    : Mat(table.Vinv * t.entries * table.V);
  table.referenceLeakage = offdiagonal_leakage(d);
  if (!(table.referenceLeakage < 1e-9))
    fail(Errc::DegenerateSpectrum, "similarity transform fails to diagonalize T at the reference point");
  return table;
}

SpectrumTable diagonalize_auto(const ModelParams& params) {
  Complex ref = kDefaultReferencePoint;
  for (int attempt = 0; attempt < 8; ++attempt) {
    try {
      return diagonalize(params, ref);
    } catch (const Error& e) {
      if (e.code() != Errc::DegenerateSpectrum) throw;
      ref += Complex{0.2143, 0.1029};  // deterministic shift sequence
    }
  }
  fail(Errc::DegenerateSpectrum, "no well-conditioned reference point found");
}

Eigen::VectorXcd eigenvalues_at(const SpectrumTable& table, Complex lambda, double* leakage,
                                std::vector<double>* branchLeakage) {
  TransferMatrix t = build_transfer(table.params, lambda);
  const int branches = table.branchCount();
  Eigen::VectorXcd d(branches);
  Mat y(t.entries.rows(), branches);
  for (int k = 0; k < branches; ++k) {
    y.col(k) = compensated_matvec(t.entries, table.V.col(k));
    d(k) = compensated_row_dot(table.Vinv, k, y.col(k));
  }
  if (leakage || branchLeakage) {
    Mat full = table.Vinv * y;
    full.diagonal() = d;
    if (branchLeakage) {
      branchLeakage->resize(branches);
      for (int k = 0; k < branches; ++k) {
        Eigen::VectorXcd col = full.col(k);
        col(k) = 0.0;
        const double diag = std::abs(d(k));
        (*branchLeakage)[k] = diag > 0 ? col.norm() / diag : col.norm();
      }
    }
    if (leakage) *leakage = offdiagonal_leakage(full);
  }
  return d;
}

Complex eigenvalue_at(const SpectrumTable& table, int branch, Complex lambda, double* leakage) {
  if (branch < 0 || branch >= table.branchCount()) fail(Errc::IndexRange, "branch out of range");
  TransferMatrix t = build_transfer(table.params, lambda);
  const Eigen::VectorXcd y = compensated_matvec(t.entries, table.V.col(branch));
  const Complex value = compensated_row_dot(table.Vinv, branch, y);
  if (leakage) {
    Eigen::VectorXcd col = table.Vinv * y;
    col(branch) = 0.0;  // off-diagonal mass only
    const double diag = std::abs(value);
    *leakage = diag > 0 ? col.norm() / diag : col.norm();
  }
  return value;
}

}  // namespace sixvertex
