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

#include <cmath>

#include "helmlab/params.hpp"
#include "helmlab/types.hpp"

namespace helmlab {

// Pair-weighted Helmlab color difference:
//   S_L = 1 + s_L (Lbar - 0.5)^2,  S_C = 1 + s_C Cbar,
//   d   = [(dL / S_L)^2 + w_C (da^2 + db^2) / S_C^2]^(p/2),
//   dE  = [d / (1 + c d)]^q.
// The means are taken over the pair, so the result is symmetric and invariant
// under any rotation of the (a, b) plane. `alpha` does not enter.
inline double delta_e(const HelmlabColor& x, const HelmlabColor& y, const DistanceParams& dp) {
  const double Lbar = 0.5 * (x.L + y.L);
  const double abar = 0.5 * (x.a + y.a);
  const double bbar = 0.5 * (x.b + y.b);
  const double Cbar = std::sqrt(abar * abar + bbar * bbar);
  const double SL = 1.0 + dp.s_l * (Lbar - 0.5) * (Lbar - 0.5);
  const double SC = 1.0 + dp.s_c * Cbar;
  const double dL = x.L - y.L;
  const double da = x.a - y.a;
  const double db = x.b - y.b;
  const double sq = (dL / SL) * (dL / SL) + dp.w_c * (da * da + db * db) / (SC * SC);
  const double d = std::pow(sq, 0.5 * dp.p);
  return std::pow(d / (1.0 + dp.c * d), dp.q);
}

inline double delta_e_euclidean(const HelmlabColor& x, const HelmlabColor& y) {
  const double dL = x.L - y.L, da = x.a - y.a, db = x.b - y.b;
  return std::sqrt(dL * dL + da * da + db * db);
}

}  // namespace helmlab
