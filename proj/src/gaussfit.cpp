#include "atomlens/gaussfit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace atomlens {

namespace {

constexpr double kFwhmPerSigma = 2.3548200450309493; // 2 sqrt(2 ln 2)
constexpr double kStepTol = 1e-6;
constexpr std::size_t kMaxIters = 200;

// Solve the 3x3 system M d = b in place; returns false when singular.
bool solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> b,
            std::array<double, 3>& d) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-300) return false;
    std::swap(m[col], m[piv]);
    std::swap(b[col], b[piv]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 3; ++c) m[r][c] -= f * m[col][c];
      b[r] -= f * b[col];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 3; ++c) s -= m[r][c] * d[c];
    d[r] = s / m[r][r];
  }
  return true;
}

double cost_of(const std::vector<double>& x, const std::vector<double>& y,
               double a, double c, double s) {
  double cost = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = (x[i] - c) / s;
    const double r = a * std::exp(-0.5 * u * u) - y[i];
    cost += r * r;
  }
  return cost;
}

} // namespace

GaussianFit fit_gaussian(const std::vector<double>& x,
                         const std::vector<double>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("fit_gaussian: x/y size mismatch");
  if (x.size() < 8) throw std::invalid_argument("fit_gaussian: too few samples");

  const double ymax = *std::max_element(y.begin(), y.end());
  if (!(ymax > 0) || !std::isfinite(ymax))
    throw std::invalid_argument("fit_gaussian: profile has no positive peak");
  std::size_t above = 0;
  for (double v : y)
    if (v > 0.5 * ymax) ++above;
  if (above < 8)
    throw std::invalid_argument(
        "fit_gaussian: fewer than 8 samples above half maximum");

  // Moment-based start: centroid and rms of the clipped profile.
  double w = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = std::max(y[i], 0.0);
    w += v;
    m1 += v * x[i];
  }
  double c = m1 / w;
  double m2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    m2 += std::max(y[i], 0.0) * (x[i] - c) * (x[i] - c);
  double s = std::sqrt(m2 / w);
  double a = ymax;
  const double span = *std::max_element(x.begin(), x.end()) -
                      *std::min_element(x.begin(), x.end());
  if (!(s > 0) || !std::isfinite(s)) s = 0.1 * span;
  s = std::clamp(s, 1e-6 * span, span);

  double lambda = 1e-3;
  double cost = cost_of(x, y, a, c, s);
  GaussianFit fit;
  for (std::size_t iter = 0; iter < kMaxIters; ++iter) {
    fit.iterations = iter + 1;
    // Normal equations for parameters (a, c, s).
    std::array<std::array<double, 3>, 3> h{};
    std::array<double, 3> g{};
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double u = (x[i] - c) / s;
      const double e = std::exp(-0.5 * u * u);
      const double r = a * e - y[i];
      const std::array<double, 3> j{e, a * e * u / s, a * e * u * u / s};
      for (int p = 0; p < 3; ++p) {
        g[p] += j[p] * r;
        for (int q = p; q < 3; ++q) h[p][q] += j[p] * j[q];
      }
    }
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < p; ++q) h[p][q] = h[q][p];

    bool stepped = false;
    for (int attempt = 0; attempt < 12 && !stepped; ++attempt) {
      auto hd = h;
      for (int p = 0; p < 3; ++p) hd[p][p] += lambda * h[p][p];
      std::array<double, 3> d{};
      if (!solve3(hd, g, d)) {
        lambda *= 10.0;
        continue;
      }
      const double na = a - d[0];
      const double nc = c - d[1];
      const double ns = s - d[2];
      if (!(na > 0) || !(ns > 0)) {
        lambda *= 10.0;
        continue;
      }
      const double ncost = cost_of(x, y, na, nc, ns);
      if (ncost <= cost) {
        const double rel = std::max({std::abs(d[0]) / std::abs(na),
                                     std::abs(d[1]) / std::max(std::abs(nc), ns),
                                     std::abs(d[2]) / ns});
        a = na;
        c = nc;
        s = ns;
        cost = ncost;
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        if (rel < kStepTol) {
          fit.converged = true;
          iter = kMaxIters; // double break
        }
      } else {
        lambda *= 2.5;
      }
    }
    if (!stepped) break; // stuck: report best point found
  }

  fit.amplitude = a;
  fit.center = c;
  fit.sigma = s;
  fit.fwhm = kFwhmPerSigma * s;
  fit.residual_rms = std::sqrt(cost / static_cast<double>(x.size())) / a;
  return fit;
}

} // namespace atomlens
