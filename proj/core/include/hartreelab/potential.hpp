#pragma once

#include <string>

#include "hartreelab/types.hpp"

namespace hlab {

// External potential V(t,x). Every variant is C-infinity with analytic
// derivatives to third order; second and third derivatives are bounded.
struct PotentialSpec {
  enum class Kind { Zero, Quadratic, ModulatedQuadratic, Bump, TrapBump };
  Kind kind = Kind::Zero;
  int dim = 1;

  // quadratic: 1/2 <x,Ax> + b.x
  Mat A;
  Vec b;
  // modulated quadratic: 1/2 w(t)^2 |x|^2, w(t) = w0 (1 + delta sin(nu t))
  double omega0 = 1, delta = 0, nu = 1;
  // bump: c exp(-|x|^2/sigma^2); trap_bump adds 1/2 omega0^2 |x|^2
  double c = 1, sigma = 1;

  static PotentialSpec zero(int d = 1);
  static PotentialSpec harmonic(double omega = 1.0, int d = 1);
  static PotentialSpec quadratic(const Mat& A, const Vec& b);
  static PotentialSpec modulated(double w0, double delta, double nu, int d = 1);
  static PotentialSpec bump(double c, double sigma, int d = 1);
  static PotentialSpec trap_bump(double omega, double c, double sigma, int d = 1);
  std::string name() const;
  bool time_dependent() const { return kind == Kind::ModulatedQuadratic && delta != 0; }
};

double eval_V(const PotentialSpec& s, double t, const Vec& x);
Vec grad_V(const PotentialSpec& s, double t, const Vec& x);
Mat hess_V(const PotentialSpec& s, double t, const Vec& x);
Tensor3 third_V(const PotentialSpec& s, double t, const Vec& x);

// Interaction kernel K(x), real, C^3 and W^{3,inf}.
struct KernelSpec {
  enum class Kind { Zero, BEC, Gaussian, ShiftedGaussian, CosineBump };
  Kind kind = Kind::Zero;
  int dim = 1;

  // BEC: (a1 + a2 |x|^2 + a3 |x|^4) e^{-A2 |x|^2} + a4 e^{-B2 |x|^2}
  double a1 = 1, a2 = 0, a3 = 0, a4 = 0, A = 1, B = 1;
  // gaussian: lam e^{-|x|^2/sigma^2}; shifted: lam e^{-|x-x0|^2/sigma^2}
  double lam = 1, sigma = 1;
  Vec x0;
  // cosine bump: lam 2^-4 (1+cos(pi|x|/w))^4 on |x|<w, else 0
  double w = 1;

  static KernelSpec zero(int d = 1);
  static KernelSpec bec(double a1, double a2, double a3, double a4, double A,
                        double B, int d = 1);
  static KernelSpec gaussian(double lam, double sigma, int d = 1);
  static KernelSpec shifted_gaussian(double lam, double sigma, const Vec& x0);
  static KernelSpec cosine_bump(double lam, double w, int d = 1);
  std::string name() const;
  bool is_even() const;  // K(-x) = K(x)
  bool is_zero() const { return kind == Kind::Zero; }
};

double eval_K(const KernelSpec& s, const Vec& x);
Vec grad_K(const KernelSpec& s, const Vec& x);
Mat hess_K(const KernelSpec& s, const Vec& x);
Tensor3 third_K(const KernelSpec& s, const Vec& x);

// scalar (d=1) conveniences
double eval_K1(const KernelSpec& s, double x);

// Taylor remainders:
//   V_j^eps(t,q;y) = (V(t,q+y*se) - V(t,q) - se*y.grad V(t,q)) / eps,  se=sqrt(eps),
// with the eps=0 limit 1/2 <y, hess V(t,q) y>. Same pattern for kernels with
// base point `shift` (0 gives the diagonal remainder, delta-q the off one).
double taylor_remainder_V(const PotentialSpec& s, double t, const Vec& q,
                          const Vec& y, double eps);
double taylor_remainder_K(const KernelSpec& s, const Vec& shift, const Vec& y,
                          double eps);

// Third-order Taylor sources of the corrector system, evaluated at one point:
//   Vcal = 1/6 grad^3 V(t,q_j) [y,y,y]
//   Kcal_diag = 1/6 grad^3 K(0) [y,y,y]
//   Kcal_off  = 1/6 grad^3 K(dq) [y,y,y]
struct ThirdTaylorTerms {
  double vcal, kcal_diag, kcal_off;
};
ThirdTaylorTerms third_taylor_terms(const PotentialSpec& sv,
                                    const KernelSpec& sk, double t,
                                    const Vec& qj, const Vec& dq, const Vec& y);

}  // namespace hlab
