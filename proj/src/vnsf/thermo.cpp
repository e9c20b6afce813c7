#include "vnsf/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vnsf/error.hpp"

namespace vnsf {

PressureLaw::PressureLaw(double gamma) : gamma_(gamma) {
  require(std::isfinite(gamma) && gamma > 1.0, ErrorCode::InvalidArgument, "pressure law needs gamma > 1");
}

namespace {

void require_nonneg(double rho, const char* where) {
  if (!(rho >= 0.0)) fail(ErrorCode::InvalidArgument, std::string(where) + ": density must be nonnegative");
}

void require_positive_ref(double r, const char* where) {
  if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, std::string(where) + ": reference density must be positive");
}

}  // namespace

double pressure(double rho, const PressureLaw& law) {
  require_nonneg(rho, "pressure");
  return std::pow(rho, law.gamma());
}

double internal_energy(double rho, const PressureLaw& law) {
  require_nonneg(rho, "internal_energy");
  return std::pow(rho, law.gamma()) / (law.gamma() - 1.0);
}

double psi_prime(double rho, const PressureLaw& law) {
  require_nonneg(rho, "psi_prime");
  const double g = law.gamma();
  return g * std::pow(rho, g - 1.0) / (g - 1.0);
}

double psi_second(double rho, const PressureLaw& law) {
  require_nonneg(rho, "psi_second");
  const double g = law.gamma();
  if (rho == 0.0 && g < 2.0) fail(ErrorCode::InvalidArgument, "psi_second: singular at zero density for gamma < 2");
  return g * std::pow(rho, g - 2.0);
}

double bregman_psi(double rho, double r, const PressureLaw& law) {
  require_nonneg(rho, "bregman_psi");
  require_positive_ref(r, "bregman_psi");
  const double d = internal_energy(rho, law) - internal_energy(r, law) - psi_prime(r, law) * (rho - r);
  // Convexity makes the exact value nonnegative; cancellation can leave -ulp.
  return d < 0.0 ? 0.0 : d;
}

double relative_pressure(double rho, double r, const PressureLaw& law) {
  require_nonneg(rho, "relative_pressure");
  require_positive_ref(r, "relative_pressure");
  const double g = law.gamma();
  const double dp = g * std::pow(r, g - 1.0);
  const double d = pressure(rho, law) - pressure(r, law) - dp * (rho - r);
  return d < 0.0 ? 0.0 : d;
}

double sugiyama_threshold(int d) { return 2.0 * (d + 1.0) / (d + 2.0); }

SugiyamaExponents sugiyama_exponents(double m, int d) {
  require(d == 2 || d == 3, ErrorCode::InvalidArgument, "sugiyama_exponents: dimension must be 2 or 3");
  const double threshold = sugiyama_threshold(d);
  if (!(m > threshold)) {
    std::ostringstream os;
    os << "sugiyama_exponents: m = " << m << " must exceed 2(d+1)/(d+2) = " << threshold << " for d = " << d;
    fail(ErrorCode::InvalidArgument, os.str());
  }
  SugiyamaExponents e;
  e.m = m;
  e.d = d;
  e.theta = 2.0 * d / (m * (d + 2.0));
  const double a = m / (m - 1.0);
  // 2m(1-theta)/(2(m-1) - m theta) with theta substituted, so integer data stays exact.
  const double b = (m * (d + 2.0) - 2.0 * d) / ((m - 1.0) * (d + 2.0) - d);
  e.c2 = std::max(a, b);
  return e;
}

BregmanBounds fit_bregman_bounds(const PressureLaw& law, double r_min, double r_max, double big_r, double rho_max,
                                 int samples) {
  require(r_min > 0.0 && r_max >= r_min, ErrorCode::InvalidArgument, "fit_bregman_bounds: need 0 < r_min <= r_max");
  require(big_r > r_max && rho_max > big_r, ErrorCode::InvalidArgument,
          "fit_bregman_bounds: need r_max < R < rho_max");
  require(samples >= 2, ErrorCode::InvalidArgument, "fit_bregman_bounds: need at least two samples");
  BregmanBounds out;
  out.big_r = big_r;
  out.c3 = std::numeric_limits<double>::infinity();
  out.c4 = std::numeric_limits<double>::infinity();
  const int nr = std::max(2, samples / 8);
  for (int a = 0; a < nr; ++a) {
    const double r = r_min + (r_max - r_min) * a / (nr - 1);
    for (int b = 0; b <= samples; ++b) {
      const double rho = rho_max * b / samples;
      const double diff = std::abs(rho - r);
      if (diff < 1e-6 * r) continue;
      const double breg = bregman_psi(rho, r, law);
      if (rho <= big_r) {
        out.c3 = std::min(out.c3, breg / (diff * diff));
      } else {
        out.c4 = std::min(out.c4, breg / std::pow(diff, law.gamma()));
      }
    }
  }
  return out;
}

}  // namespace vnsf
