#include "pdesel/field.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pdesel/candidate_library.hpp"
#include "pdesel/error.hpp"

namespace pdesel {

namespace {

void check_uniform_axis(const Eigen::VectorXd& axis, const char* name) {
  if (axis.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " axis needs at least two points");
  }
  const double h = axis(1) - axis(0);
  if (!(h > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " axis must be strictly increasing");
  }
  for (Eigen::Index i = 1; i < axis.size(); ++i) {
    const double step = axis(i) - axis(i - 1);
    if (!(step > 0.0) || std::abs(step - h) > 1e-12 * std::abs(h)) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string(name) + " axis spacing is not uniform at index " + std::to_string(i));
    }
  }
}

}  // namespace

void FieldData::validate() const {
  check_uniform_axis(x, "x");
  check_uniform_axis(t, "t");
  if (u.rows() != x.size() || u.cols() != t.size()) {
    throw Error(ErrorCode::InvalidArgument, "field shape does not match its axes");
  }
  if (!u.allFinite()) throw Error(ErrorCode::InvalidArgument, "field contains non-finite values");
}

InitialCondition parse_initial_condition(const std::string& name) {
  if (name == "gaussian_pulse") return InitialCondition::GaussianPulse;
  if (name == "sine") return InitialCondition::Sine;
  throw Error(ErrorCode::InvalidArgument, "unknown initial condition '" + name + "'");
}

const char* to_string(InitialCondition ic) noexcept {
  return ic == InitialCondition::GaussianPulse ? "gaussian_pulse" : "sine";
}

void step_burgers_periodic(Eigen::VectorXd& state, double nu, double dx, double dt, int n_steps) {
  const Eigen::Index n = state.size();
  Eigen::VectorXd next(n);
  const double inv_2dx = 1.0 / (2.0 * dx);
  const double inv_dx2 = 1.0 / (dx * dx);
  for (int s = 0; s < n_steps; ++s) {
    bool ok = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index ip = (i + 1 == n) ? 0 : i + 1;
      const Eigen::Index im = (i == 0) ? n - 1 : i - 1;
      const double advection = state(i) * (state(ip) - state(im)) * inv_2dx;
      const double diffusion = nu * (state(ip) - 2.0 * state(i) + state(im)) * inv_dx2;
      const double value = state(i) + dt * (diffusion - advection);
      ok = ok && (std::abs(value) <= 1e6);
      next(i) = value;
    }
    if (!ok) {
      throw Error(ErrorCode::UnstableSimulation,
                  "solution exceeded 1e6 in magnitude; the step size violates stability");
    }
    state.swap(next);
  }
}

FieldData simulate_burgers(double nu, const BurgersDomain& domain, InitialCondition initial,
                           unsigned long long /*seed*/) {
  if (!(nu > 0.0)) throw Error(ErrorCode::InvalidArgument, "nu must be positive");
  if (domain.n_x < 64) throw Error(ErrorCode::InvalidArgument, "n_x must be at least 64");
  if (domain.n_t < 50) throw Error(ErrorCode::InvalidArgument, "n_t must be at least 50");
  if (!(domain.x_max > domain.x_min)) {
    throw Error(ErrorCode::InvalidArgument, "x_max must exceed x_min");
  }
  if (!(domain.t_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_max must be positive");

  const double length = domain.x_max - domain.x_min;
  const double dx = length / domain.n_x;
  const double dt_out = domain.t_max / (domain.n_t - 1);

  FieldData field;
  field.x.resize(domain.n_x);
  for (int i = 0; i < domain.n_x; ++i) field.x(i) = domain.x_min + i * dx;
  field.t.resize(domain.n_t);
  for (int j = 0; j < domain.n_t; ++j) field.t(j) = j * dt_out;
  field.u.resize(domain.n_x, domain.n_t);

  Eigen::VectorXd state(domain.n_x);
  for (int i = 0; i < domain.n_x; ++i) {
    const double xi = field.x(i);
    if (initial == InitialCondition::GaussianPulse) {
      const double center = domain.x_min + 0.375 * length;
      state(i) = std::exp(-(xi - center) * (xi - center));
    } else {
      state(i) = std::sin(2.0 * M_PI * (xi - domain.x_min) / length);
    }
  }
  field.u.col(0) = state;

  for (int j = 1; j < domain.n_t; ++j) {
    const double u_max = std::max(state.cwiseAbs().maxCoeff(), 1e-12);
    const double cap = 0.4 * std::min(dx * dx / nu, dx / u_max);
    const int n_sub = std::max(1, static_cast<int>(std::ceil(dt_out / cap)));
    step_burgers_periodic(state, nu, dx, dt_out / n_sub, n_sub);
    field.u.col(j) = state;
  }
  field.validate();
  return field;
}

void write_field_csv(const FieldData& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << "x,t,u\n";
  for (Eigen::Index i = 0; i < field.n_x(); ++i) {
    for (Eigen::Index j = 0; j < field.n_t(); ++j) {
      out << format_full(field.x(i)) << ',' << format_full(field.t(j)) << ','
          << format_full(field.u(i, j)) << '\n';
    }
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

void write_field_sidecar(const FieldData& field, double nu, unsigned long long seed,
                         const std::string& path) {
  nlohmann::json j{{"n_x", field.n_x()}, {"n_t", field.n_t()}, {"dx", field.dx()},
                   {"dt", field.dt()},   {"nu", nu},           {"seed", seed}};
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
}

FieldData read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open field CSV '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::IoError, "empty field CSV '" + path + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,t,u") {
    throw Error(ErrorCode::IoError, "field CSV '" + path + "' must start with header x,t,u");
  }

  std::vector<double> xs, ts, us;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    double row[3];
    for (int c = 0; c < 3; ++c) {
      if (!std::getline(ss, cell, ',')) {
        throw Error(ErrorCode::IoError, "short row in field CSV '" + path + "'");
      }
      // strtod, not stod: subnormal cells underflow to ERANGE under stod but
      // still parse to the correctly rounded value (see candidate_library.cpp).
      char* end = nullptr;
      row[c] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || static_cast<std::size_t>(end - cell.c_str()) != cell.size() ||
          !std::isfinite(row[c])) {
        throw Error(ErrorCode::IoError, "malformed cell '" + cell + "' in field CSV '" + path + "'");
      }
    }
    xs.push_back(row[0]);
    ts.push_back(row[1]);
    us.push_back(row[2]);
  }
  if (us.empty()) throw Error(ErrorCode::IoError, "field CSV '" + path + "' has no data rows");

  // Rows are x-outer: the leading block shares x(0) and enumerates the t axis.
  std::size_t n_t = 1;
  while (n_t < xs.size() && xs[n_t] == xs[0]) ++n_t;
  if (us.size() % n_t != 0) {
    throw Error(ErrorCode::IoError, "field CSV '" + path + "' is not a complete grid");
  }
  const std::size_t n_x = us.size() / n_t;

  FieldData field;
  field.x.resize(static_cast<Eigen::Index>(n_x));
  field.t.resize(static_cast<Eigen::Index>(n_t));
  field.u.resize(static_cast<Eigen::Index>(n_x), static_cast<Eigen::Index>(n_t));
  for (std::size_t i = 0; i < n_x; ++i) {
    field.x(static_cast<Eigen::Index>(i)) = xs[i * n_t];
    for (std::size_t j = 0; j < n_t; ++j) {
      const std::size_t r = i * n_t + j;
      if (i == 0) field.t(static_cast<Eigen::Index>(j)) = ts[j];
      if (xs[r] != field.x(static_cast<Eigen::Index>(i)) ||
          ts[r] != field.t(static_cast<Eigen::Index>(j))) {
        throw Error(ErrorCode::IoError,
                    "field CSV '" + path + "' rows are not in row-major x-outer order");
      }
      field.u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = us[r];
    }
  }
  field.validate();
  return field;
}

FieldSidecar read_field_sidecar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open sidecar '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
    FieldSidecar meta;
    meta.n_x = j.at("n_x").get<long>();
    meta.n_t = j.at("n_t").get<long>();
    meta.dx = j.at("dx").get<double>();
    meta.dt = j.at("dt").get<double>();
    meta.nu = j.at("nu").get<double>();
    meta.seed = j.at("seed").get<unsigned long long>();
    return meta;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoError, "malformed sidecar '" + path + "': " + e.what());
  }
}

}  // namespace pdesel
