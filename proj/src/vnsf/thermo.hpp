#pragma once

// Barotropic pressure law p(rho) = rho^gamma and derived pointwise functions.

namespace vnsf {

class PressureLaw {
 public:
  explicit PressureLaw(double gamma);

  double gamma() const { return gamma_; }
  // Existence theory threshold for the three-dimensional problem.
  bool admissible_3d() const { return gamma_ > 8.0 / 5.0; }
  // Interpolation (Sugiyama) threshold m > 2(d+1)/(d+2) with m = gamma, d = 2.
  bool admissible_2d() const { return gamma_ > 3.0 / 2.0; }

 private:
  double gamma_;
};

double pressure(double rho, const PressureLaw& law);
// psi(rho) = rho^gamma / (gamma - 1), so that p = rho psi' - psi.
double internal_energy(double rho, const PressureLaw& law);
double psi_prime(double rho, const PressureLaw& law);
// Singular at rho = 0 when gamma < 2; callers supply a positive density.
double psi_second(double rho, const PressureLaw& law);
// psi(rho | r) = psi(rho) - psi(r) - psi'(r)(rho - r), r > 0.
double bregman_psi(double rho, double r, const PressureLaw& law);
// p(rho | r) = p(rho) - p(r) - p'(r)(rho - r), r > 0.
double relative_pressure(double rho, double r, const PressureLaw& law);

struct SugiyamaExponents {
  double m = 0.0;
  int d = 0;
  double theta = 0.0;
  double c2 = 0.0;
};

// Threshold 2(d+1)/(d+2) below which the interpolation inequality fails.
double sugiyama_threshold(int d);
SugiyamaExponents sugiyama_exponents(double m, int d);

// Largest constants with psi(rho|r) >= c3 (rho-r)^2 for 0 <= rho <= big_r and
// psi(rho|r) >= c4 |rho-r|^gamma for rho > big_r, estimated over a dense
// sample of r in [r_min, r_max] and rho in [0, rho_max].
struct BregmanBounds {
  double c3 = 0.0;
  double c4 = 0.0;
  double big_r = 0.0;
};

BregmanBounds fit_bregman_bounds(const PressureLaw& law, double r_min, double r_max, double big_r, double rho_max,
                                 int samples);

}  // namespace vnsf
