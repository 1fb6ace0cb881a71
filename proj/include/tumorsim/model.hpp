#pragma once

#include <span>

#include "tumorsim/fem.hpp"

namespace tumorsim {

enum class MobilityMode { degenerate, constant };

/// Coefficients of the tumor / nutrient / MDE / ECM system. Defaults are the
/// dimensionless values of the reference 2D scenario.
struct ModelParams {
  double eps_T = 0.005;
  double chi_C = 0.0;
  double chi_H = 0.001;
  double delta_sigma = 0.01;
  double delta_T = 0.0;
  double lambda_T_pro = 2.0;
  double lambda_T_apo = 0.005;
  double lambda_N_deg = 0.0;
  double lambda_VN = 1.0;
  double lambda_sigma_sat = 0.0;
  double lambda_M_dec = 1.0;
  double lambda_M_pro = 1.0;
  double lambda_theta_dec = 0.1;
  double lambda_theta_deg = 1.0;
  double E_bar = 0.045;
  double sigma_H = 0.6;
  double sigma_VN = 0.44;
  double M_T = 2.0;
  double D_sigma = 0.001;
  double D_M = 0.1;
  double eps_sigmoid = 0.01;
  double kappa_m = 1e-3;
  /// `constant` replaces the degenerate mobility by M_T / 16.
  MobilityMode mobility = MobilityMode::degenerate;

  double lambda_N_dec() const { return lambda_N_deg - lambda_T_apo; }

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;

  bool operator==(const ModelParams&) const = default;
};


double cutoff(double x);
double sigmoid(double x, double eps_sigmoid);

struct PotentialValues {
  double psi;       // E (phi (1 - phi))^2
  double dpsi_c;    // derivative of the convex part
  double dpsi_e;    // derivative of the expansive part
  double d2psi_c;   // second derivative of the convex part
};

/// Double well split as psi = psi_c - psi_e with
/// psi_c = E (phi^4 - 2 phi^3 + 1.5 phi^2) and psi_e = E phi^2 / 2.
PotentialValues potential(double phi, double E_bar);
double potential_convex(double phi, double E_bar);
double potential_expansive(double phi, double E_bar);

double mobility(double phi_T, double phi_N, const ModelParams& p);

struct PointValues {
  double phi_T = 0.0;
  double phi_N = 0.0;
  double phi_sigma = 0.0;
  double phi_M = 0.0;
};

struct Reactions {
  double f1, f2, f3, f4, f5;
};

/// Michaelis-Menten factor C(s) / (C(s) + lambda_sat), with 0/0 := 0.
double saturation(double phi_sigma, double lambda_sigma_sat);

Reactions reactions(const PointValues& v, const ModelParams& p);

/// Ginzburg-Landau free energy of (phi_T, phi_sigma), integrated with the
/// edge-midpoint rule used by the assembly routines.
double energy(const P1Space& space, std::span<const double> phi_T, std::span<const double> phi_sigma,
              const ModelParams& p);

}  // namespace tumorsim
