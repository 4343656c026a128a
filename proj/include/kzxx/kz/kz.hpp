#pragma once

#include <map>
#include <utility>
#include <vector>

namespace kzxx::kz {

// 3D-XY critical exponents and the KZ prefactors. t-hat uses z*nu = 0.67
// while xi-hat uses nu = 0.67169: the two values track their separate uses
// in the scaling analysis.
struct KZConfig {
  double z = 1.0;
  double nu = 0.67169;
  double eta = 0.03810;
  double z_nu_t = 0.67;
  double prefactor_t = 0.36;
  double prefactor_xi = 1.0;

  double t_exponent() const { return z_nu_t / (1.0 + z_nu_t); }
  double xi_exponent() const { return nu / (1.0 + z * nu); }
};

struct KZScales {
  double tau_r = 0.0;   // J_r t_r
  double t_hat = 0.0;   // J_r t-hat = prefactor_t * tau_r^(z nu/(1+z nu))
  double xi_hat = 0.0;  // prefactor_xi * tau_r^(nu/(1+z nu)), lattice units
  KZConfig cfg;
};

KZScales kz_scales(double tau_r, const KZConfig& cfg = {});

// ---- correlation-length fit ------------------------------------------------

struct FitWindow {
  double r_min = 2.0;
  double r_max = 1e30;   // clipped to the largest R with C > floor
  double floor = 1e-8;
};

struct FitResult {
  double xi = 0.0;
  double xi_err = 0.0;
  double r_min = 0.0, r_max = 0.0;  // window actually used
  double residual_norm = 0.0;       // sqrt(SSR) of log C
  int n_points = 0;
  int n_excluded = 0;               // points inside the window at or below the floor
};

// Least-squares fit of log C = a - R/xi over the window. Error bars come
// from the regression covariance. Throws NoSignalError when nothing usable
// survives the floor.
FitResult fit_xi(const std::vector<std::pair<double, double>>& rc,
                 const FitWindow& window = {});

// ---- scaling collapses -----------------------------------------------------

struct Curve {
  std::vector<double> x, y;  // sorted ascending in x
};

struct CollapseResult {
  std::map<double, Curve> scaled;  // keyed by tau_r
  double residual = 0.0;           // mean pairwise MSE on overlapping grids
  int pair_count = 0;
};

// Eq.-style critical collapse: (R, C(t_c, R)) per ramp time is rescaled to
// (R/xi_hat, xi_hat^(1+eta) C).
CollapseResult collapse_critical(
    const std::map<double, std::vector<std::pair<double, double>>>& curves,
    const KZConfig& cfg = {});

// xi(t) collapse: (t, xi) is rescaled to ((t - t_c)/t_hat, xi/xi_hat) and the
// residual is evaluated only in the KZ window, scaled time in [-1, 1].
CollapseResult collapse_xi_of_t(const std::map<double, Curve>& xi_curves,
                                double s_c, const KZConfig& cfg = {});

struct EdgeCollapse {
  CollapseResult minus_branch;
  CollapseResult plus_branch;
  double inter_branch = 0.0;  // cross-branch MSE on the overlapping grids
};

EdgeCollapse collapse_edges(
    const std::map<double, std::vector<std::pair<double, double>>>& minus_curves,
    const std::map<double, std::vector<std::pair<double, double>>>& plus_curves,
    const KZConfig& cfg = {});

// ---- generic power law -----------------------------------------------------

struct PowerLawFit {
  double exponent = 0.0;
  double exponent_err = 0.0;
  double prefactor = 0.0;
  double x_min = 0.0, x_max = 0.0;
  double goodness = 0.0;  // RMS residual of log y
};

// log-log least squares; requires strictly positive data.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace kzxx::kz
