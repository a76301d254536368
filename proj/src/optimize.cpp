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

#include "paraqst/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "paraqst/errors.hpp"

namespace paraqst::optimize {

double bisect(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
  if (!(lo < hi)) throw ValidationError("bisect: requires lo < hi");
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw NumericalError("bisect: f(lo) and f(hi) do not bracket a sign change");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= rel_tol * std::max(1.0, std::abs(mid)) + 1e-300) break;
  }
  return 0.5 * (lo + hi);
}

double golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                       double rel_tol) {
  if (!(lo <= hi)) throw ValidationError("golden_minimize: requires lo <= hi");
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 300 && (b - a) > rel_tol * std::max(1.0, std::abs(a) + std::abs(b)); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

namespace {

std::vector<double> clamp_box(std::vector<double> x, const std::vector<double>& lower,
                              const std::vector<double>& upper) {
  if (!lower.empty())
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::max(x[i], lower[i]);
  if (!upper.empty())
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::min(x[i], upper[i]);
  return x;
}

double simplex_diameter(const std::vector<std::vector<double>>& pts) {
  double d = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < pts[a].size(); ++i) {
        const double diff = pts[a][i] - pts[b][i];
        s += diff * diff;
      }
      d = std::max(d, std::sqrt(s));
    }
  return d;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, const NelderMeadOptions& options,
                             const std::vector<double>& lower, const std::vector<double>& upper) {
  const std::size_t n = x0.size();
  if (n == 0) throw ValidationError("nelder_mead: empty parameter vector");
  if (!lower.empty() && lower.size() != n)
    throw ValidationError("nelder_mead: lower bound dimension mismatch");
  if (!upper.empty() && upper.size() != n)
    throw ValidationError("nelder_mead: upper bound dimension mismatch");

  // Initial simplex: x0 plus one relative perturbation per coordinate.
  std::vector<std::vector<double>> pts;
  pts.push_back(clamp_box(x0, lower, upper));
  for (std::size_t i = 0; i < n; ++i) {
    auto p = x0;
    const double step =
        options.initial_step * (std::abs(p[i]) > 1e-12 ? std::abs(p[i]) : 1.0);
    p[i] += step;
    pts.push_back(clamp_box(std::move(p), lower, upper));
  }
  std::vector<double> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = f(pts[i]);

  const double initial_scale = std::max(1e-12, simplex_diameter(pts));

  NelderMeadResult result;
  auto order = [&] {
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return vals[a] < vals[b];
    });
    std::vector<std::vector<double>> p2;
    std::vector<double> v2;
    for (auto i : idx) {
      p2.push_back(pts[i]);
      v2.push_back(vals[i]);
    }
    pts = std::move(p2);
    vals = std::move(v2);
  };

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    order();
    result.trace.push_back(vals.front());
    if (simplex_diameter(pts) <= options.tolerance * initial_scale) {
      result.converged = true;
      break;
    }

    // Centroid of all but the worst point.
    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += pts[k][i];
    for (auto& c : centroid) c /= static_cast<double>(n);

    auto blend = [&](double coeff) {
      std::vector<double> p(n);
      for (std::size_t i = 0; i < n; ++i)
        p[i] = centroid[i] + coeff * (centroid[i] - pts.back()[i]);
      return clamp_box(std::move(p), lower, upper);
    };

    const auto reflected = blend(options.reflection);
    const double fr = f(reflected);
    if (fr < vals.front()) {
      const auto expanded = blend(options.expansion);
      const double fe = f(expanded);
      if (fe < fr) {
        pts.back() = expanded;
        vals.back() = fe;
      } else {
        pts.back() = reflected;
        vals.back() = fr;
      }
      continue;
    }
    if (fr < vals[vals.size() - 2]) {
      pts.back() = reflected;
      vals.back() = fr;
      continue;
    }
    const bool outside = fr < vals.back();
    const auto contracted = blend(outside ? options.reflection * options.contraction
                                          : -options.contraction);
    const double fc = f(contracted);
    if (fc < (outside ? fr : vals.back())) {
      pts.back() = contracted;
      vals.back() = fc;
      continue;
    }
    // Shrink towards the best point.
    for (std::size_t k = 1; k < pts.size(); ++k) {
      for (std::size_t i = 0; i < n; ++i)
        pts[k][i] = pts[0][i] + options.shrink * (pts[k][i] - pts[0][i]);
      pts[k] = clamp_box(std::move(pts[k]), lower, upper);
      vals[k] = f(pts[k]);
    }
  }
  order();
  result.x = pts.front();
  result.value = vals.front();
  result.iterations = it;
  if (result.trace.empty()) result.trace.push_back(result.value);
  return result;
}

}  // namespace paraqst::optimize
