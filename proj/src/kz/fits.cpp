#include <algorithm>
#include <cmath>

#include "kzxx/errors.hpp"
#include "kzxx/kz/kz.hpp"

namespace kzxx::kz {

namespace {

struct LinFit {
  double slope, intercept, slope_err, ssr;
  int n;
};

LinFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[static_cast<size_t>(i)];
    sy += y[static_cast<size_t>(i)];
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    double dx = x[static_cast<size_t>(i)] - mx;
    sxx += dx * dx;
    sxy += dx * (y[static_cast<size_t>(i)] - my);
  }
  if (sxx == 0.0) throw ConfigError("least_squares: degenerate abscissa");
  LinFit f;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.ssr = 0.0;
  for (int i = 0; i < n; ++i) {
    double r = y[static_cast<size_t>(i)] - (f.intercept + f.slope * x[static_cast<size_t>(i)]);
    f.ssr += r * r;
  }
  f.slope_err = n > 2 ? std::sqrt(f.ssr / (n - 2) / sxx) : 0.0;
  return f;
}

}  // namespace

FitResult fit_xi(const std::vector<std::pair<double, double>>& rc,
                 const FitWindow& window) {
  bool any_signal = false;
  double largest_r_with_signal = -1.0;
  for (const auto& [r, c] : rc)
    if (c > window.floor) {
      any_signal = true;
      largest_r_with_signal = std::max(largest_r_with_signal, r);
    }
  if (!any_signal) throw NoSignalError("no signal");

  const double r_max = std::min(window.r_max, largest_r_with_signal);
  std::vector<double> xs, ys;
  int excluded = 0;
  for (const auto& [r, c] : rc) {
    if (r < window.r_min || r > r_max) continue;
    if (!(c > window.floor)) {
      ++excluded;
      continue;
    }
    xs.push_back(r);
    ys.push_back(std::log(c));
  }
  if (xs.size() < 3)
    throw std::invalid_argument("fit_xi: need at least 3 usable (R, C) points, have " +
                                std::to_string(xs.size()));
  LinFit f = least_squares(xs, ys);
  if (!(f.slope < 0.0)) throw NoSignalError("fit_xi: correlator does not decay");
  FitResult out;
  out.xi = -1.0 / f.slope;
  out.xi_err = f.slope_err / (f.slope * f.slope);
  out.r_min = *std::min_element(xs.begin(), xs.end());
  out.r_max = *std::max_element(xs.begin(), xs.end());
  out.residual_norm = std::sqrt(f.ssr);
  out.n_points = f.n;
  out.n_excluded = excluded;
  return out;
}

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_power_law: need matching x/y with >= 2 points");
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("fit_power_law: data must be strictly positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  LinFit f = least_squares(lx, ly);
  PowerLawFit out;
  out.exponent = f.slope;
  out.exponent_err = f.slope_err;
  out.prefactor = std::exp(f.intercept);
  out.x_min = *std::min_element(x.begin(), x.end());
  out.x_max = *std::max_element(x.begin(), x.end());
  out.goodness = std::sqrt(f.ssr / f.n);
  return out;
}

}  // namespace kzxx::kz
