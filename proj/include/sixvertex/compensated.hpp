#pragma once

// Error-free transformations used by the numerics internals: Neumaier
// accumulation and double-double complex products. Everything stays in
// IEEE double pairs; only rounding errors are tracked explicitly.

#include <cmath>

#include "sixvertex/types.hpp"

namespace sixvertex {

struct CompensatedSum {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

/// Compensated complex accumulator for sums of products.
struct CompensatedComplex {
  CompensatedSum re, im;
  void addProduct(Complex a, Complex b) {
    auto mul = [](double x, double y, CompensatedSum& acc) {
      const double p = x * y;
      acc.add(p);
      acc.add(std::fma(x, y, -p));
    };
    mul(a.real(), b.real(), re);
    mul(-a.imag(), b.imag(), re);
    mul(a.real(), b.imag(), im);
    mul(a.imag(), b.real(), im);
  }
  void add(Complex z) {
    re.add(z.real());
    im.add(z.imag());
  }
  Complex value() const { return {re.value(), im.value()}; }
};

/// Unevaluated double-double value hi + lo.
struct DD {
  double hi = 0.0, lo = 0.0;

  static DD renorm(double hi, double lo) {
    const double s = hi + lo;
    return {s, lo - (s - hi)};
  }
  double value() const { return hi + lo; }
};

inline DD dd_add(DD a, DD b) {
  const double s = a.hi + b.hi;
  const double bb = s - a.hi;
  const double err = (a.hi - (s - bb)) + (b.hi - bb);
  return DD::renorm(s, err + a.lo + b.lo);
}

inline DD dd_neg(DD a) { return {-a.hi, -a.lo}; }

inline DD dd_mul_d(DD a, double b) {
  const double p = a.hi * b;
  const double e = std::fma(a.hi, b, -p);
  return DD::renorm(p, std::fma(a.lo, b, e));
}

/// Double-double complex: product chains keep ~1 ulp relative accuracy.
struct DDComplex {
  DD re, im;

  static DDComplex from(Complex z) { return {{z.real(), 0.0}, {z.imag(), 0.0}}; }
  Complex value() const { return {re.value(), im.value()}; }
};

inline DDComplex ddc_add(DDComplex a, DDComplex b) {
  return {dd_add(a.re, b.re), dd_add(a.im, b.im)};
}

inline DDComplex ddc_mul(DDComplex a, Complex b) {
  return {dd_add(dd_mul_d(a.re, b.real()), dd_neg(dd_mul_d(a.im, b.imag()))),
          dd_add(dd_mul_d(a.re, b.imag()), dd_mul_d(a.im, b.real()))};
}

/// num / den with one Newton correction step off the double quotient.
inline DDComplex ddc_div(const DDComplex& num, const DDComplex& den) {
  const Complex d = den.value();
  const Complex q0 = num.value() / d;
  const DDComplex r = ddc_add(num, ddc_mul(DDComplex{dd_neg(den.re), dd_neg(den.im)}, q0));
  const Complex q1 = r.value() / d;
  return ddc_add(DDComplex::from(q0), DDComplex::from(q1));
}

}  // namespace sixvertex
