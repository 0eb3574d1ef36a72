#pragma once

#include <Eigen/Dense>
#include <string>

namespace pdesel {

/// A scalar field u(x, t) sampled on a regular grid. Rows index space,
/// columns index time. Both axes must be strictly increasing with uniform
/// spacing (within 1e-12 relative) and all values finite.
struct FieldData {
  Eigen::MatrixXd u;  // n_x x n_t
  Eigen::VectorXd x;
  Eigen::VectorXd t;

  Eigen::Index n_x() const { return u.rows(); }
  Eigen::Index n_t() const { return u.cols(); }
  double dx() const { return x(1) - x(0); }
  double dt() const { return t(1) - t(0); }

  void validate() const;
};

enum class InitialCondition { GaussianPulse, Sine };

InitialCondition parse_initial_condition(const std::string& name);
const char* to_string(InitialCondition ic) noexcept;

/// Spatial/temporal extent of a simulation. The spatial grid is periodic:
/// x_i = x_min + i * dx with dx = (x_max - x_min) / n_x, so x_max itself is
/// the wrap-around point and not a grid node.
struct BurgersDomain {
  double x_min = -8.0;
  double x_max = 8.0;
  int n_x = 256;
  double t_max = 10.0;
  int n_t = 101;
};

/// Integrates u_t = -u u_x + nu u_xx with periodic boundaries by explicit
/// forward-Euler substepping between output frames. The substep obeys
/// dt <= 0.4 dx^2 / nu alongside an advective bound 0.4 dx / max|u|; any
/// sample exceeding 1e6 in magnitude (or turning non-finite) aborts with
/// UnstableSimulation.
///
/// The dynamics are deterministic; `seed` is carried into the metadata
/// sidecar and reserved for stochastic initial perturbations.
///
/// Initial profiles: GaussianPulse is a unit-amplitude pulse of unit width
/// centered three-eighths of the way across the domain (exp(-(x+2)^2) on the
/// default grid); Sine is one full period of amplitude 1.
FieldData simulate_burgers(double nu, const BurgersDomain& domain, InitialCondition initial,
                           unsigned long long seed);

/// One forward-Euler stage of the periodic semi-discretization, exposed so the
/// stepping rule itself is testable: state is advanced in place by n_steps
/// substeps of length dt.
void step_burgers_periodic(Eigen::VectorXd& state, double nu, double dx, double dt, int n_steps);

/// CSV layout: header `x,t,u`, one row per sample in row-major order with x
/// outer, 17 significant digits. The sidecar carries
/// {n_x, n_t, dx, dt, nu, seed}.
void write_field_csv(const FieldData& field, const std::string& path);
void write_field_sidecar(const FieldData& field, double nu, unsigned long long seed,
                         const std::string& path);
FieldData read_field_csv(const std::string& path);

struct FieldSidecar {
  long n_x = 0;
  long n_t = 0;
  double dx = 0.0;
  double dt = 0.0;
  double nu = 0.0;
  unsigned long long seed = 0;
};

FieldSidecar read_field_sidecar(const std::string& path);

}  // namespace pdesel
