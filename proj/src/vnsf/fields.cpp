#include "vnsf/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vnsf {

std::string to_string(BcKind bc) { return bc == BcKind::PeriodicAll ? "periodic" : "paper"; }

BcKind bc_from_string(const std::string& token) {
  if (token == "periodic") return BcKind::PeriodicAll;
  if (token == "paper") return BcKind::PaperBC;
  fail(ErrorCode::Parse, "unknown boundary condition token '" + token + "' (expected periodic|paper)");
}

Grid make_grid(int dim, int nx, int ny, double lx, double ly, BcKind bc) {
  require(dim == 1 || dim == 2, ErrorCode::InvalidArgument, "grid dimension must be 1 or 2");
  require(nx >= 4, ErrorCode::InvalidArgument, "grid needs nx >= 4");
  require(std::isfinite(lx) && lx > 0.0, ErrorCode::InvalidArgument, "domain extent lx must be positive");
  Grid g;
  g.dim = dim;
  g.bc = bc;
  g.nx = nx;
  g.hx = lx / nx;
  g.lx = g.hx * nx;
  if (dim == 1) {
    g.ny = 1;
    g.hy = 1.0;
    g.ly = 1.0;
  } else {
    require(ny >= 4, ErrorCode::InvalidArgument, "grid needs ny >= 4 in two dimensions");
    require(std::isfinite(ly) && ly > 0.0, ErrorCode::InvalidArgument, "domain extent ly must be positive");
    g.ny = ny;
    g.hy = ly / ny;
    g.ly = g.hy * ny;
  }
  return g;
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b)) fail(ErrorCode::GridMismatch, std::string(where) + ": fields live on different grids");
}

ScalarField::ScalarField(const Grid& grid, double fill) : grid_(grid), values_(grid.cells(), fill) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  require(values_.size() == grid_.cells(), ErrorCode::InvalidArgument, "scalar field size does not match grid");
}

VectorField::VectorField(const Grid& grid, double fill)
    : grid_(grid), values_(static_cast<std::size_t>(grid.dim) * grid.cells(), fill) {}

VectorField::VectorField(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  require(values_.size() == static_cast<std::size_t>(grid_.dim) * grid_.cells(), ErrorCode::InvalidArgument,
          "vector field size does not match grid");
}

void validate(const PhysParams& p) {
  auto bad = [](const std::string& what) { fail(ErrorCode::InvalidArgument, what); };
  if (!(std::isfinite(p.gamma) && p.gamma > 1.0)) bad("adiabatic exponent must satisfy gamma > 1");
  if (!(std::isfinite(p.mu) && p.mu > 0.0)) bad("shear viscosity must satisfy mu > 0 (μ>0)");
  if (!(std::isfinite(p.lam) && 3.0 * p.lam + 2.0 * p.mu > 0.0)) bad("Lamé coefficients must satisfy 3*lambda + 2*mu > 0 (3λ+2μ>0)");
  if (!(std::isfinite(p.zeta) && p.zeta > 0.0)) bad("drag relaxation must satisfy zeta > 0");
  if (!(std::isfinite(p.eps) && p.eps >= 0.0)) bad("artificial viscosity must satisfy eps >= 0");
  if (!(std::isfinite(p.delta) && p.delta >= 0.0)) bad("artificial pressure must satisfy delta >= 0");
  if (p.delta > 0.0 && !(std::isfinite(p.beta) && p.beta > 4.0)) bad("artificial pressure exponent must satisfy beta > 4 (β>4)");
}

State make_state(const Grid& grid, double t, ScalarField rho, VectorField v, ScalarField c) {
  require_same_grid(grid, rho.grid(), "make_state(rho)");
  require_same_grid(grid, v.grid(), "make_state(v)");
  require_same_grid(grid, c.grid(), "make_state(c)");
  return State{t, std::move(rho), std::move(v), std::move(c)};
}

State constant_state(const Grid& grid, double rho, double c) {
  return State{0.0, ScalarField(grid, rho), VectorField(grid, 0.0), ScalarField(grid, c)};
}

namespace {

void check_finite(std::span<const double> values, const char* name) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      std::ostringstream os;
      os << "non-finite " << name << " value at index " << k;
      fail(ErrorCode::NonFinite, os.str());
    }
  }
}

}  // namespace

void validate_state(const State& s) {
  require_same_grid(s.rho.grid(), s.v.grid(), "state(v)");
  require_same_grid(s.rho.grid(), s.c.grid(), "state(c)");
  require(std::isfinite(s.t), ErrorCode::NonFinite, "state time is not finite");
  check_finite(s.rho.values(), "rho");
  check_finite(s.v.values(), "v");
  check_finite(s.c.values(), "c");
  const auto r = s.rho.values();
  const double rmax = r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
  const double floor = -1e-13 * std::max(rmax, 0.0);
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (r[k] < floor) fail(ErrorCode::InvalidArgument, "negative density at cell " + std::to_string(k));
    if (s.c[k] < floor) fail(ErrorCode::InvalidArgument, "negative chemoattractant at cell " + std::to_string(k));
  }
}

double integrate_values(const Grid& grid, std::span<const double> values) {
  double sum = 0.0;
  for (double x : values) {
    if (!std::isfinite(x)) fail(ErrorCode::NonFinite, "integrate_cellwise: non-finite integrand");
    sum += x;
  }
  return sum * grid.cell_volume();
}

double integrate_cellwise(const ScalarField& field) { return integrate_values(field.grid(), field.values()); }

State restrict_state(const State& fine, const Grid& coarse) {
  const Grid& fg = fine.grid();
  require(fg.dim == coarse.dim && fg.bc == coarse.bc, ErrorCode::GridMismatch, "restrict_state: incompatible grids");
  require(fg.nx % coarse.nx == 0 && fg.ny % coarse.ny == 0, ErrorCode::GridMismatch,
          "restrict_state: coarse cell counts must divide the fine ones");
  require(std::abs(fg.lx - coarse.lx) <= 1e-12 * fg.lx && std::abs(fg.ly - coarse.ly) <= 1e-12 * fg.ly,
          ErrorCode::GridMismatch, "restrict_state: domain extents differ");
  const int rx = fg.nx / coarse.nx;
  const int ry = fg.ny / coarse.ny;
  const double w = 1.0 / (static_cast<double>(rx) * ry);
  State out{fine.t, ScalarField(coarse), VectorField(coarse), ScalarField(coarse)};
  std::vector<double> mom(static_cast<std::size_t>(coarse.dim), 0.0);
  for (int J = 0; J < coarse.ny; ++J) {
    for (int I = 0; I < coarse.nx; ++I) {
      double rho = 0.0, c = 0.0;
      std::fill(mom.begin(), mom.end(), 0.0);
      for (int j = J * ry; j < (J + 1) * ry; ++j) {
        for (int i = I * rx; i < (I + 1) * rx; ++i) {
          const std::size_t f = fg.index(i, j);
          rho += fine.rho[f];
          c += fine.c[f];
          for (int k = 0; k < coarse.dim; ++k) mom[k] += fine.rho[f] * fine.v(k, f);
        }
      }
      const std::size_t C = coarse.index(I, J);
      out.rho[C] = rho * w;
      out.c[C] = c * w;
      for (int k = 0; k < coarse.dim; ++k) out.v(k, C) = out.rho[C] > 0.0 ? mom[k] * w / out.rho[C] : 0.0;
    }
  }
  return out;
}

void Trajectory::append(State s) {
  if (!snapshots.empty()) {
    require(s.t > snapshots.back().t, ErrorCode::InvalidArgument, "trajectory times must be strictly increasing");
    require_same_grid(snapshots.back().grid(), s.grid(), "trajectory");
  }
  snapshots.push_back(std::move(s));
}

}  // namespace vnsf
