#pragma once

// Brute-force reference implementations used by the tests. They work one
// component at a time through Get/Set and share no code with the library's
// packed kernels.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "hdsz/hypervector.hpp"

namespace hdsz::oracle {

inline Hypervector RandomVector(std::size_t dim, std::mt19937_64& rng) {
  Hypervector v(dim);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < dim; ++i) v.Set(i, coin(rng));
  return v;
}

inline bool TieBit(const TieRule& tie, std::size_t i) {
  return (tie.Word(i / 64) >> (i % 64)) & 1U;
}

// Componentwise count, then majority with the documented tie stream.
inline Hypervector Majority(std::span<const Hypervector> inputs, const TieRule& tie) {
  const std::size_t dim = inputs.front().Dim();
  Hypervector out(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t ones = 0;
    for (const Hypervector& v : inputs) ones += v.Get(i) ? 1 : 0;
    const std::size_t n = inputs.size();
    if (2 * ones > n) {
      out.Set(i, true);
    } else if (2 * ones == n) {
      out.Set(i, TieBit(tie, i));
    }
  }
  return out;
}

inline Hypervector Xor(const Hypervector& a, const Hypervector& b) {
  Hypervector out(a.Dim());
  for (std::size_t i = 0; i < a.Dim(); ++i) out.Set(i, a.Get(i) != b.Get(i));
  return out;
}

inline std::size_t Distance(const Hypervector& a, const Hypervector& b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.Dim(); ++i) d += a.Get(i) != b.Get(i) ? 1 : 0;
  return d;
}

inline double Pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Magnitude of an order-N Butterworth after the bilinear transform with the
// cutoff prewarped: analog prototype evaluated at the warped frequency.
inline double Warp(double f, double fs) { return 2.0 * fs * std::tan(std::numbers::pi * f / fs); }

inline double ButterworthLowpassGain(int order, double fc, double f, double fs) {
  const double r = Warp(f, fs) / Warp(fc, fs);
  return 1.0 / std::sqrt(1.0 + std::pow(r, 2 * order));
}

inline double ButterworthHighpassGain(int order, double fc, double f, double fs) {
  const double r = Warp(fc, fs) / Warp(f, fs);
  return 1.0 / std::sqrt(1.0 + std::pow(r, 2 * order));
}

// LBP code by enumerating the l differences from the definition.
inline int LbpCode(std::span<const double> x, std::size_t t, int l) {
  int code = 0;
  for (int k = 0; k < l; ++k) {
    code = code * 2 + (x[t + k + 1] - x[t + k] > 0 ? 1 : 0);
  }
  return code;
}

}  // namespace hdsz::oracle
