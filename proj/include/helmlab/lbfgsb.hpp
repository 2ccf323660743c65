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
#include <deque>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "helmlab/errors.hpp"

namespace helmlab {

// Box-constrained limited-memory quasi-Newton minimizer. Search directions
// come from the L-BFGS two-loop recursion restricted to the variables that
// are not pinned at an active bound; steps are projected back onto the box
// and accepted under an Armijo condition measured along the projected path,
// so the objective never increases between accepted iterates.

struct LbfgsbOptions {
  std::size_t max_iters = 500;
  std::size_t memory = 10;
  double pgtol = 1e-9;         // stop when the projected gradient is this small
  double ftol = 1e-13;         // stop on relative decrease below this
  double fd_step = 1e-6;       // relative where |x| > 1
  double armijo = 1e-4;
  std::size_t max_backtracks = 40;
};

struct LbfgsbIterate {
  std::size_t iteration = 0;  // 1-based count of accepted steps
  double f = 0.0;
  std::span<const double> x;
};

struct LbfgsbResult {
  std::vector<double> x;
  double f = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  std::string message;
  std::vector<double> trace;  // f at the start point and after every accepted step
};

using Objective = std::function<double(std::span<const double>)>;

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

class Lbfgsb {
 public:
  Lbfgsb(Objective f, std::vector<double> lower, std::vector<double> upper, LbfgsbOptions opt = {})
      : f_(std::move(f)), lo_(std::move(lower)), hi_(std::move(upper)), opt_(opt) {
    if (lo_.size() != hi_.size()) throw ValidationError("optimizer: bound vectors differ in length");
    for (std::size_t i = 0; i < lo_.size(); ++i) {
      if (!(lo_[i] <= hi_[i])) throw ValidationError("optimizer: lower bound exceeds upper bound");
    }
  }

  std::vector<double> project(std::vector<double> x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo_[i], hi_[i]);
    return x;
  }

  // Central differences, one-sided next to a bound or an infeasible probe.
  std::vector<double> gradient(std::span<const double> x, double fx) {
    const std::size_t n = x.size();
    std::vector<double> g(n, 0.0), probe(x.begin(), x.end());
    for (std::size_t i = 0; i < n; ++i) {
      const double h = opt_.fd_step * std::max(1.0, std::abs(x[i]));
      const double up = std::min(x[i] + h, hi_[i]), dn = std::max(x[i] - h, lo_[i]);
      probe[i] = up;
      const double fu = up > x[i] ? eval(probe) : fx;
      probe[i] = dn;
      const double fd = dn < x[i] ? eval(probe) : fx;
      probe[i] = x[i];
      const bool ok_u = std::isfinite(fu) && up > x[i], ok_d = std::isfinite(fd) && dn < x[i];
      if (ok_u && ok_d) g[i] = (fu - fd) / (up - dn);
      else if (ok_u) g[i] = (fu - fx) / (up - x[i]);
      else if (ok_d) g[i] = (fx - fd) / (x[i] - dn);
    }
    return g;
  }

  LbfgsbResult minimize(std::vector<double> x0,
                        const std::function<void(const LbfgsbIterate&)>& on_step = {}) {
    if (x0.size() != lo_.size()) throw ValidationError("optimizer: start point has the wrong dimension");
    evals_ = 0;
    LbfgsbResult r;
    std::vector<double> x = project(std::move(x0));
    double fx = eval(x);
    if (!std::isfinite(fx)) throw FitError("optimizer: objective is not finite at the start point");
    r.trace.push_back(fx);
    const std::size_t n = x.size();
    std::deque<std::vector<double>> S, Y;
    std::vector<double> g = opt_.max_iters > 0 ? gradient(x, fx) : std::vector<double>(n, 0.0);
    r.message = "iteration limit reached";

    for (std::size_t it = 0; it < opt_.max_iters; ++it) {
      double pg = 0.0;
      std::vector<char> is_free(n);
      for (std::size_t i = 0; i < n; ++i) {
        pg = std::max(pg, std::abs(std::clamp(x[i] - g[i], lo_[i], hi_[i]) - x[i]));
        const bool pinned = (x[i] <= lo_[i] && g[i] > 0.0) || (x[i] >= hi_[i] && g[i] < 0.0);
        is_free[i] = !pinned;
      }
      if (pg < opt_.pgtol) {
        r.converged = true;
        r.message = "projected gradient below tolerance";
        break;
      }

      std::vector<double> d = direction(g, is_free, S, Y);
      double slope = detail::dot(g, d);
      if (!(slope < 0.0)) {
        S.clear();
        Y.clear();
        d = direction(g, is_free, S, Y);
        slope = detail::dot(g, d);
      }

      double t = 1.0;
      if (S.empty()) {
        double dmax = 0.0;
        for (double v : d) dmax = std::max(dmax, std::abs(v));
        if (dmax > 0.0) t = std::min(1.0, 0.1 / dmax);
      }
      std::vector<double> xn;
      double fn = fx;
      bool accepted = false;
      for (std::size_t k = 0; k <= opt_.max_backtracks; ++k, t *= 0.5) {
        xn = x;
        for (std::size_t i = 0; i < n; ++i) xn[i] = std::clamp(x[i] + t * d[i], lo_[i], hi_[i]);
        double decrease = 0.0;
        for (std::size_t i = 0; i < n; ++i) decrease += g[i] * (xn[i] - x[i]);
        if (decrease >= 0.0) continue;
        fn = eval(xn);
        if (std::isfinite(fn) && fn <= fx + opt_.armijo * decrease) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        if (!S.empty()) {
          S.clear();
          Y.clear();
          --it;  // retry this iteration from steepest descent
          continue;
        }
        r.converged = true;
        r.message = "line search made no progress";
        break;
      }

      std::vector<double> gn = gradient(xn, fn);
      std::vector<double> s(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = xn[i] - x[i];
        y[i] = gn[i] - g[i];
      }
      const double sy = detail::dot(s, y);
      if (sy > 1e-10 * detail::dot(y, y)) {
        S.push_back(std::move(s));
        Y.push_back(std::move(y));
        if (S.size() > opt_.memory) {
          S.pop_front();
          Y.pop_front();
        }
      }
      const double rel = (fx - fn) / std::max({1.0, std::abs(fx), std::abs(fn)});
      x = std::move(xn);
      fx = fn;
      g = std::move(gn);
      ++r.iterations;
      r.trace.push_back(fx);
      if (on_step) on_step({r.iterations, fx, x});
      if (rel <= opt_.ftol) {
        r.converged = true;
        r.message = "relative decrease below tolerance";
        break;
      }
    }
    r.x = std::move(x);
    r.f = fx;
    r.evaluations = evals_;
    return r;
  }

 private:
  double eval(std::span<const double> x) {
    ++evals_;
    const double v = f_(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  }

  // -H g over the free variables; pinned variables get a zero component.
  static std::vector<double> direction(const std::vector<double>& g, const std::vector<char>& is_free,
                                       const std::deque<std::vector<double>>& S,
                                       const std::deque<std::vector<double>>& Y) {
    const std::size_t n = g.size(), m = S.size();
    auto fdot = [&](const std::vector<double>& a, const std::vector<double>& b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (is_free[i]) s += a[i] * b[i];
      return s;
    };
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = is_free[i] ? g[i] : 0.0;
    std::vector<double> alpha(m), rho(m);
    for (std::size_t k = m; k-- > 0;) {
      const double sy = fdot(S[k], Y[k]);
      rho[k] = sy > 0.0 ? 1.0 / sy : 0.0;
      alpha[k] = rho[k] * fdot(S[k], q);
      for (std::size_t i = 0; i < n; ++i)
        if (is_free[i]) q[i] -= alpha[k] * Y[k][i];
    }
    if (m > 0) {
      const double yy = fdot(Y.back(), Y.back()), sy = fdot(S.back(), Y.back());
      if (yy > 0.0 && sy > 0.0)
        for (double& v : q) v *= sy / yy;
    }
    for (std::size_t k = 0; k < m; ++k) {
      const double beta = rho[k] * fdot(Y[k], q);
      for (std::size_t i = 0; i < n; ++i)
        if (is_free[i]) q[i] += (alpha[k] - beta) * S[k][i];
    }
    for (double& v : q) v = -v;
    return q;
  }

  Objective f_;
  std::vector<double> lo_, hi_;
  LbfgsbOptions opt_;
  std::size_t evals_ = 0;
};

}  // namespace helmlab
