#include "tumorsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tumorsim {

namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("model.") + field + " must be " + what);
}

}  // namespace

void ModelParams::validate() const {
  const struct {
    const char* name;
    double value;
  } rates[] = {{"chi_C", chi_C},
               {"chi_H", chi_H},
               {"delta_T", delta_T},
               {"lambda_T_pro", lambda_T_pro},
               {"lambda_T_apo", lambda_T_apo},
               {"lambda_N_deg", lambda_N_deg},
               {"lambda_VN", lambda_VN},
               {"lambda_sigma_sat", lambda_sigma_sat},
               {"lambda_M_dec", lambda_M_dec},
               {"lambda_theta_dec", lambda_theta_dec},
               {"lambda_theta_deg", lambda_theta_deg},
               {"sigma_H", sigma_H},
               {"sigma_VN", sigma_VN},
               {"kappa_m", kappa_m}};
  for (const auto& r : rates) require(std::isfinite(r.value) && r.value >= 0.0, r.name, "finite and >= 0");
  require(std::isfinite(lambda_M_pro) && lambda_M_pro > 0.0, "lambda_M_pro", "> 0");
  require(std::isfinite(eps_T) && eps_T > 0.0, "eps_T", "> 0");
  require(std::isfinite(delta_sigma) && delta_sigma > 0.0, "delta_sigma", "> 0");
  require(std::isfinite(E_bar) && E_bar > 0.0, "E_bar", "> 0");
  require(std::isfinite(M_T) && M_T > 0.0, "M_T", "> 0");
  require(std::isfinite(D_sigma) && D_sigma > 0.0, "D_sigma", "> 0");
  require(std::isfinite(D_M) && D_M > 0.0, "D_M", "> 0");
  require(std::isfinite(eps_sigmoid) && eps_sigmoid > 0.0, "eps_sigmoid", "> 0");
}

double cutoff(double x) { return std::max(0.0, std::min(1.0, x)); }

double sigmoid(double x, double eps_sigmoid) {
  const double z = x / eps_sigmoid;
  // exp(-z) overflows for z < -709.
  if (z < -700.0) return 0.0;
  if (z > 700.0) return 1.0;
  return 1.0 / (1.0 + std::exp(-z));
}

double potential_convex(double phi, double e) {
  const double p2 = phi * phi;
  return e * (p2 * p2 - 2.0 * p2 * phi + 1.5 * p2);
}

double potential_expansive(double phi, double e) { return 0.5 * e * phi * phi; }

PotentialValues potential(double phi, double e) {
  const double w = phi * (1.0 - phi);
  const double p2 = phi * phi;
  const double d = 2.0 * phi - 1.0;
  return {e * w * w, e * (4.0 * p2 * phi - 6.0 * p2 + 3.0 * phi), e * phi, 3.0 * e * d * d};
}

double mobility(double phi_T, double phi_N, const ModelParams& p) {
  if (p.mobility == MobilityMode::constant) return p.M_T / 16.0;
  const double v = cutoff(phi_T - phi_N);
  const double w = v * (1.0 - v);
  return p.M_T * (w * w + p.kappa_m);
}

double saturation(double phi_sigma, double lambda_sigma_sat) {
  const double c = cutoff(phi_sigma);
  if (c == 0.0) return 0.0;
  return c / (c + lambda_sigma_sat);
}

Reactions reactions(const PointValues& v, const ModelParams& p) {
  const double cT = cutoff(v.phi_T);
  const double viable = cT - cutoff(v.phi_N);
  const double cS = cutoff(v.phi_sigma);
  const double cM = cutoff(v.phi_M);
  Reactions r{};
  r.f1 = p.lambda_T_pro * viable * (1.0 - cT);
  r.f2 = p.lambda_VN * viable;
  r.f3 = p.lambda_T_pro * viable * saturation(v.phi_sigma, p.lambda_sigma_sat);
  r.f4 = p.lambda_M_pro * viable * p.sigma_H / (p.sigma_H + cS) * (1.0 - cM) - p.lambda_theta_dec * cM;
  r.f5 = p.lambda_theta_deg * cM;
  return r;
}

double energy(const P1Space& space, std::span<const double> phi_T, std::span<const double> phi_sigma,
              const ModelParams& p) {
  const auto t_q = space.to_quadrature(phi_T);
  const auto s_q = space.to_quadrature(phi_sigma);
  QuadratureField density(t_q.size());
  for (std::size_t k = 0; k < t_q.size(); ++k) {
    const double t = t_q[k];
    const double s = s_q[k];
    density[k] = potential(t, p.E_bar).psi - p.chi_C * s * t + s * s / (2.0 * p.delta_sigma) +
                 0.5 * p.delta_T * t * t;
  }
  double e = space.integrate(density);
  const auto grads = space.element_gradients(phi_T);
  const double half_eps2 = 0.5 * p.eps_T * p.eps_T;
  for (std::size_t el = 0; el < grads.size(); ++el) {
    const auto& g = grads[el];
    e += half_eps2 * space.geometry(el).area * (g[0] * g[0] + g[1] * g[1]);
  }
  return e;
}

}  // namespace tumorsim
