// Copyright 2026 The paraqst Authors
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

#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracles {

double bessel_series(int n, double x) {
  if (n < 0) throw std::invalid_argument("bessel_series: n must be non-negative");
  double sign = 1.0;
  if (x < 0.0) {
    x = -x;
    if (n % 2 == 1) sign = -1.0;
  }
  const double half = 0.5 * x;
  // term_k = (-1)^k (x/2)^{2k+n} / (k! (n+k)!)
  double term = 1.0;
  for (int i = 1; i <= n; ++i) term *= half / i;
  double sum = term;
  for (int k = 1; k <= 60; ++k) {
    term *= -half * half / (static_cast<double>(k) * (n + k));
    sum += term;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-30)) break;
  }
  return sign * sum;
}

double bessel_quadrature(int n, double x) {
  // Simpson's rule on f(t) = cos(n t - x sin t) over [0, pi].
  const int segments = 2000;  // Even.
  const double h = M_PI / segments;
  auto f = [&](double t) { return std::cos(n * t - x * std::sin(t)); };
  double sum = f(0.0) + f(M_PI);
  for (int i = 1; i < segments; ++i) {
    sum += f(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / (3.0 * M_PI);
}

Eigen::MatrixXcd expm_taylor(const Eigen::MatrixXcd& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();  // Infinity norm.
  int squarings = 0;
  Eigen::MatrixXcd scaled = a;
  while (norm / std::pow(2.0, squarings) > 0.5) ++squarings;
  scaled /= std::pow(2.0, squarings);

  const auto n = a.rows();
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

std::vector<std::complex<double>> dft_direct(const std::vector<std::complex<double>>& x,
                                             bool inverse) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = sign * 2.0 * M_PI * static_cast<double>(k * j % n) / n;
      acc += x[j] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = inverse ? acc / static_cast<double>(n) : acc;
  }
  return out;
}

std::vector<double> convolve_direct(const std::vector<double>& x, const std::vector<double>& h) {
  if (x.empty() || h.empty()) return {};
  std::vector<double> out(x.size() + h.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < h.size(); ++j) out[i + j] += x[i] * h[j];
  }
  return out;
}

Eigen::Matrix2d inverse_2x2(const Eigen::Matrix2d& m) {
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  Eigen::Matrix2d inv;
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return inv / det;
}

double detuned_exchange_population(double g_ang, double delta_ang, double t_ns) {
  const double omega = std::sqrt(g_ang * g_ang + 0.25 * delta_ang * delta_ang);
  if (omega == 0.0) return 1.0;
  const double s = std::sin(omega * t_ns);
  return 1.0 - (g_ang * g_ang) / (omega * omega) * s * s;
}

Eigen::Matrix2cd apply_kraus(const std::vector<Eigen::Matrix2cd>& ks,
                             const Eigen::Matrix2cd& rho) {
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  for (const auto& k : ks) out += k * rho * k.adjoint();
  return out;
}

std::vector<Eigen::Matrix2cd> amplitude_damping(double p) {
  Eigen::Matrix2cd k0 = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2cd k1 = Eigen::Matrix2cd::Zero();
  // Basis (g, e): |e> decays to |g> with probability p.
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - p);
  k1(0, 1) = std::sqrt(p);
  return {k0, k1};
}

}  // namespace oracles
