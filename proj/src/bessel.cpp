/*
 * Copyright 2026 The stkernels Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */
#include "stk/bessel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "stk/errors.hpp"

namespace stk {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2OverPi = std::sqrt(2.0 / kPi);

int order_code(double nu) {
  if (nu == -0.5) return -1;
  if (nu == 0.0) return 0;
  if (nu == 0.5) return 1;
  if (nu == 1.0) return 2;
  if (nu == 1.5) return 3;
  throw DomainError("unsupported Bessel order " + std::to_string(nu));
}

// Power series of J_n(x) / x^n for integer n.
double series_scaled(int n, double x) {
  const double h = 0.25 * x * x;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term /= 2.0 * k;  // 1 / (2^n n!)
  double sum = term;
  for (int m = 1; m < 200; ++m) {
    term *= -h / (m * static_cast<double>(m + n));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Miller backward recurrence normalized by J0 + 2 sum J_2k = 1.
void miller(double x, double& j0, double& j1) {
  const int start = 2 * static_cast<int>((x + 40.0 + 8.0 * std::cbrt(x)) / 2.0);
  double jp1 = 0.0;
  double jk = 1e-300;
  double norm = 0.0;
  double keep0 = 0.0;
  double keep1 = 0.0;
  for (int k = start; k >= 1; --k) {
    const double jm1 = 2.0 * k / x * jk - jp1;
    jp1 = jk;
    jk = jm1;  // now holds J_{k-1}
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * jk;
    if (k - 1 == 1) keep1 = jk;
    if (std::abs(jk) > 1e250) {
      jk *= 1e-250;
      jp1 *= 1e-250;
      norm *= 1e-250;
      keep1 *= 1e-250;
    }
  }
  keep0 = jk;
  norm += keep0;
  j0 = keep0 / norm;
  j1 = keep1 / norm;
}

// Hankel asymptotic expansion for large x.
double asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double prev = INFINITY;
  for (int k = 1; k < 60; ++k) {
    term *= (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * x);
    if (std::abs(term) > prev) break;
    prev = std::abs(term);
    // term = a_k / x^k; even k feed P, odd k feed Q with alternating signs.
    if (k % 2 == 1)
      q += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    else
      p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    if (std::abs(term) < 1e-17) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double integer_order(int n, double x) {
  if (x < 4.0) return series_scaled(n, x) * (n == 1 ? x : 1.0);
  if (x < 25.0) {
    double j0, j1;
    miller(x, j0, j1);
    return n == 0 ? j0 : j1;
  }
  return asymptotic(n, x);
}

}  // namespace

double bessel_j(double nu, double x) {
  if (!(x >= 0.0)) throw DomainError("Bessel argument must be non-negative");
  switch (order_code(nu)) {
    case -1:
      return kSqrt2OverPi * std::cos(x) / std::sqrt(x);
    case 0:
      return integer_order(0, x);
    case 1:
      return kSqrt2OverPi * std::sin(x) / std::sqrt(x);
    case 2:
      return integer_order(1, x);
    default:
      return bessel_j_scaled(1.5, x) * x * std::sqrt(x);
  }
}

double bessel_j_scaled(double nu, double x) {
  if (!(x >= 0.0)) throw DomainError("Bessel argument must be non-negative");
  switch (order_code(nu)) {
    case -1:
      return kSqrt2OverPi * std::cos(x);
    case 0:
      return integer_order(0, x);
    case 1:
      return x < 1e-8 ? kSqrt2OverPi : kSqrt2OverPi * std::sin(x) / x;
    case 2:
      return x < 4.0 ? series_scaled(1, x) : integer_order(1, x) / x;
    default: {
      if (x < 1.0) {
        // (sin x / x - cos x) / x^2 = sum_k (-1)^(k+1) 2k x^(2k-2) / (2k+1)!
        double sum = 0.0;
        double fact = 6.0;  // (2k+1)! for k = 1
        double xp = 1.0;
        for (int k = 1; k < 30; ++k) {
          const double term = (k % 2 == 1 ? 1.0 : -1.0) * 2.0 * k * xp / fact;
          sum += term;
          if (std::abs(term) < 1e-18) break;
          xp *= x * x;
          fact *= (2.0 * k + 2) * (2.0 * k + 3);
        }
        return kSqrt2OverPi * sum;
      }
      return kSqrt2OverPi * (std::sin(x) / x - std::cos(x)) / (x * x);
    }
  }
}

double bessel_zero_approx(double nu, int m) {
  order_code(nu);
  const double beta = (m + 0.5 * nu - 0.25) * kPi;
  const double mu = 4.0 * nu * nu;
  return beta - (mu - 1.0) / (8.0 * beta);
}

}  // namespace stk
