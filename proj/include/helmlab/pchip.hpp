// Copyright 2026 The Helmlab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace helmlab {

// Monotone-preserving piecewise cubic Hermite interpolant (Fritsch-Carlson
// slopes with the weighted harmonic mean of Fritsch-Butland, and the
// three-point shape-preserving end conditions).
//
// Outside [x.front(), x.back()] the end cubic is extended; callers that need
// a different extrapolation rule handle it themselves.
class Pchip {
 public:
  Pchip() = default;

  Pchip(std::span<const double> x, std::span<const double> y)
      : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
    if (x_.size() != y_.size()) throw std::invalid_argument("Pchip: size mismatch");
    if (x_.size() < 2) throw std::invalid_argument("Pchip: need at least two nodes");
    for (std::size_t i = 1; i < x_.size(); ++i) {
      if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("Pchip: x must be strictly increasing");
    }
    compute_slopes();
  }

  double operator()(double x) const {
    const std::size_t n = x_.size();
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t k;
    if (it == x_.begin()) {
      k = 0;
    } else {
      k = static_cast<std::size_t>(it - x_.begin()) - 1;
      if (x_[k] == x) return y_[k];
      if (k >= n - 1) k = n - 2;
    }
    const double h = x_[k + 1] - x_[k];
    const double t = (x - x_[k]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[k] + h10 * h * d_[k] + h01 * y_[k + 1] + h11 * h * d_[k + 1];
  }

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }
  const std::vector<double>& slopes() const { return d_; }

 private:
  static double end_slope(double h0, double h1, double m0, double m1) {
    double d = ((2 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if (std::signbit(d) != std::signbit(m0) || d == 0.0 || m0 == 0.0) {
      d = 0.0;
    } else if ((m1 == 0.0 || std::signbit(m0) != std::signbit(m1)) &&
               std::abs(d) > std::abs(3 * m0)) {
      d = 3 * m0;
    }
    return d;
  }

  void compute_slopes() {
    const std::size_t n = x_.size();
    std::vector<double> h(n - 1), m(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      h[k] = x_[k + 1] - x_[k];
      m[k] = (y_[k + 1] - y_[k]) / h[k];
    }
    d_.assign(n, 0.0);
    if (n == 2) {
      d_[0] = d_[1] = m[0];
      return;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
      if (m[k - 1] == 0.0 || m[k] == 0.0 || std::signbit(m[k - 1]) != std::signbit(m[k])) {
        d_[k] = 0.0;
        continue;
      }
      const double w1 = 2 * h[k] + h[k - 1];
      const double w2 = h[k] + 2 * h[k - 1];
      d_[k] = (w1 + w2) / (w1 / m[k - 1] + w2 / m[k]);
    }
    d_[0] = end_slope(h[0], h[1], m[0], m[1]);
    d_[n - 1] = end_slope(h[n - 2], h[n - 3], m[n - 2], m[n - 3]);
  }

  std::vector<double> x_, y_, d_;
};

// Achromatic-axis residual (a_err, b_err) as a function of lightness,
// sampled from grays run through the pipeline before neutral correction.
//
// Between the first and last node the residual is PCHIP-interpolated. Below
// the first node it tapers linearly to zero at L = 0, since black maps to the
// origin; above the last node it is extended linearly with the end slope.
class NeutralCorrectionLut {
 public:
  NeutralCorrectionLut() = default;

  NeutralCorrectionLut(std::vector<double> L, std::vector<double> a_err,
                       std::vector<double> b_err)
      : L_(std::move(L)), a_err_(std::move(a_err)), b_err_(std::move(b_err)) {
    if (L_.size() != a_err_.size() || L_.size() != b_err_.size()) {
      throw std::invalid_argument("neutral LUT arrays must have equal length");
    }
    if (L_.size() < 2) throw std::invalid_argument("neutral LUT needs at least two nodes");
    if (!(L_.front() > 0.0)) throw std::invalid_argument("neutral LUT lightness must be positive");
    a_ = Pchip(L_, a_err_);
    b_ = Pchip(L_, b_err_);
  }

  struct Residual {
    double a = 0.0;
    double b = 0.0;
  };

  Residual operator()(double L) const {
    return {eval(a_, a_err_, L), eval(b_, b_err_, L)};
  }

  std::size_t size() const { return L_.size(); }
  const std::vector<double>& lightness() const { return L_; }
  const std::vector<double>& a_err() const { return a_err_; }
  const std::vector<double>& b_err() const { return b_err_; }

  friend bool operator==(const NeutralCorrectionLut& x, const NeutralCorrectionLut& y) {
    return x.L_ == y.L_ && x.a_err_ == y.a_err_ && x.b_err_ == y.b_err_;
  }

 private:
  double eval(const Pchip& p, const std::vector<double>& y, double L) const {
    if (L < L_.front()) return y.front() * (L / L_.front());
    if (L > L_.back()) return y.back() + p.slopes().back() * (L - L_.back());
    return p(L);
  }

  std::vector<double> L_, a_err_, b_err_;
  Pchip a_, b_;
};

}  // namespace helmlab
