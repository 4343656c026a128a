#include <cmath>

#include "kzxx/errors.hpp"
#include "kzxx/kz/kz.hpp"

namespace kzxx::kz {

KZScales kz_scales(double tau_r, const KZConfig& cfg) {
  if (!(tau_r > 0.0)) throw ConfigError("kz_scales: t_r must be > 0");
  KZScales s;
  s.tau_r = tau_r;
  s.cfg = cfg;
  s.t_hat = cfg.prefactor_t * std::pow(tau_r, cfg.t_exponent());
  s.xi_hat = cfg.prefactor_xi * std::pow(tau_r, cfg.xi_exponent());
  return s;
}

}  // namespace kzxx::kz
