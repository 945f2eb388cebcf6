// Copyright 2026 The diffrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

namespace diffrl {

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
/// Modified-Lentz continued fraction, relative tolerance ~1e-15.
double regularized_incomplete_beta(double a, double b, double x);

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile for p in (0, 1); +-inf at the endpoints.
double normal_quantile(double p);

}  // namespace diffrl
