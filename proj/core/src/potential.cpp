#include "hartreelab/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace hlab {

namespace {

Mat zero_mat(int d) { return Mat::Zero(d, d); }

// Radial profile K(x) = F(|x-x0|^2): derivatives from F', F'', F'''.
struct Radial {
  double f, f1, f2, f3;  // F and derivatives at u = r^2
};

Vec radial_grad(const Radial& r, const Vec& y) { return 2.0 * r.f1 * y; }

Mat radial_hess(const Radial& r, const Vec& y) {
  int d = int(y.size());
  Mat h = 2.0 * r.f1 * Mat::Identity(d, d);
  h += 4.0 * r.f2 * (y * y.transpose());
  return h;
}

Tensor3 radial_third(const Radial& r, const Vec& y) {
  int d = int(y.size());
  Tensor3 t = Tensor3::zero(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double s = 8.0 * r.f3 * y[i] * y[j] * y[k];
        if (i == j) s += 4.0 * r.f2 * y[k];
        if (i == k) s += 4.0 * r.f2 * y[j];
        if (j == k) s += 4.0 * r.f2 * y[i];
        t.at(i, j, k) = s;
      }
  return t;
}

Radial gauss_radial(double amp, double alpha, double u) {
  // F(u) = amp e^{-alpha u}
  double e = amp * std::exp(-alpha * u);
  return {e, -alpha * e, alpha * alpha * e, -alpha * alpha * alpha * e};
}

Radial bec_radial(const KernelSpec& s, double u) {
  // F(u) = (a1 + a2 u + a3 u^2) e^{-A^2 u} + a4 e^{-B^2 u}
  double A2 = s.A * s.A, B2 = s.B * s.B;
  double eA = std::exp(-A2 * u), eB = std::exp(-B2 * u);
  double P = s.a1 + s.a2 * u + s.a3 * u * u;
  double P1 = s.a2 + 2 * s.a3 * u, P2 = 2 * s.a3;
  Radial r;
  r.f = P * eA + s.a4 * eB;
  r.f1 = (P1 - A2 * P) * eA - s.a4 * B2 * eB;
  r.f2 = (P2 - 2 * A2 * P1 + A2 * A2 * P) * eA + s.a4 * B2 * B2 * eB;
  r.f3 = (-3 * A2 * P2 + 3 * A2 * A2 * P1 - A2 * A2 * A2 * P) * eA -
         s.a4 * B2 * B2 * B2 * eB;
  return r;
}

struct Cos1d {
  double k, k1, k2, k3;
};

Cos1d cosine_bump_1d(const KernelSpec& s, double x) {
  if (std::abs(x) >= s.w) return {0, 0, 0, 0};
  double a = M_PI / s.w, u = a * x;
  double C = 1 + std::cos(u), sn = std::sin(u), cs = std::cos(u);
  double pref = s.lam / 16.0;
  Cos1d o;
  o.k = pref * C * C * C * C;
  o.k1 = pref * (-4 * C * C * C * sn) * a;
  o.k2 = pref * (12 * C * C * sn * sn - 4 * C * C * C * cs) * a * a;
  o.k3 = pref * sn * (-24 * C * sn * sn + 36 * C * C * cs + 4 * C * C * C) *
         a * a * a;
  return o;
}

}  // namespace

// ---------- PotentialSpec ----------

PotentialSpec PotentialSpec::zero(int d) {
  PotentialSpec s;
  s.kind = Kind::Zero;
  s.dim = d;
  return s;
}

PotentialSpec PotentialSpec::harmonic(double omega, int d) {
  PotentialSpec s;
  s.kind = Kind::Quadratic;
  s.dim = d;
  s.A = omega * omega * Mat::Identity(d, d);
  s.b = Vec::Zero(d);
  return s;
}

PotentialSpec PotentialSpec::quadratic(const Mat& A, const Vec& b) {
  if (A.rows() != A.cols() || A.rows() != b.size())
    throw std::invalid_argument("quadratic: shape mismatch");
  if (!A.isApprox(A.transpose()))
    throw std::invalid_argument("quadratic: A must be symmetric");
  PotentialSpec s;
  s.kind = Kind::Quadratic;
  s.dim = int(b.size());
  s.A = A;
  s.b = b;
  return s;
}

PotentialSpec PotentialSpec::modulated(double w0, double delta, double nu, int d) {
  PotentialSpec s;
  s.kind = Kind::ModulatedQuadratic;
  s.dim = d;
  s.omega0 = w0;
  s.delta = delta;
  s.nu = nu;
  return s;
}

PotentialSpec PotentialSpec::bump(double c, double sigma, int d) {
  PotentialSpec s;
  s.kind = Kind::Bump;
  s.dim = d;
  s.c = c;
  s.sigma = sigma;
  return s;
}

PotentialSpec PotentialSpec::trap_bump(double omega, double c, double sigma, int d) {
  PotentialSpec s = bump(c, sigma, d);
  s.kind = Kind::TrapBump;
  s.omega0 = omega;
  return s;
}

std::string PotentialSpec::name() const {
  switch (kind) {
    case Kind::Zero: return "zero";
    case Kind::Quadratic: return "quadratic";
    case Kind::ModulatedQuadratic: return "modulated_quadratic";
    case Kind::Bump: return "bump";
    case Kind::TrapBump: return "trap_bump";
  }
  return "?";
}

double eval_V(const PotentialSpec& s, double t, const Vec& x) {
  switch (s.kind) {
    case PotentialSpec::Kind::Zero: return 0;
    case PotentialSpec::Kind::Quadratic:
      return 0.5 * x.dot(s.A * x) + s.b.dot(x);
    case PotentialSpec::Kind::ModulatedQuadratic: {
      double w = s.omega0 * (1 + s.delta * std::sin(s.nu * t));
      return 0.5 * w * w * x.squaredNorm();
    }
    case PotentialSpec::Kind::Bump:
      return s.c * std::exp(-x.squaredNorm() / (s.sigma * s.sigma));
    case PotentialSpec::Kind::TrapBump:
      return 0.5 * s.omega0 * s.omega0 * x.squaredNorm() +
             s.c * std::exp(-x.squaredNorm() / (s.sigma * s.sigma));
  }
  return 0;
}

Vec grad_V(const PotentialSpec& s, double t, const Vec& x) {
  switch (s.kind) {
    case PotentialSpec::Kind::Zero: return Vec::Zero(x.size());
    case PotentialSpec::Kind::Quadratic: return s.A * x + s.b;
    case PotentialSpec::Kind::ModulatedQuadratic: {
      double w = s.omega0 * (1 + s.delta * std::sin(s.nu * t));
      return w * w * x;
    }
    case PotentialSpec::Kind::Bump: {
      Radial r = gauss_radial(s.c, 1.0 / (s.sigma * s.sigma), x.squaredNorm());
      return radial_grad(r, x);
    }
    case PotentialSpec::Kind::TrapBump: {
      Radial r = gauss_radial(s.c, 1.0 / (s.sigma * s.sigma), x.squaredNorm());
      return Vec(s.omega0 * s.omega0 * x + radial_grad(r, x));
    }
  }
  return Vec::Zero(x.size());
}

Mat hess_V(const PotentialSpec& s, double t, const Vec& x) {
  int d = int(x.size());
  switch (s.kind) {
    case PotentialSpec::Kind::Zero: return zero_mat(d);
    case PotentialSpec::Kind::Quadratic: return s.A;
    case PotentialSpec::Kind::ModulatedQuadratic: {
      double w = s.omega0 * (1 + s.delta * std::sin(s.nu * t));
      return w * w * Mat::Identity(d, d);
    }
    case PotentialSpec::Kind::Bump: {
      Radial r = gauss_radial(s.c, 1.0 / (s.sigma * s.sigma), x.squaredNorm());
      return radial_hess(r, x);
    }
    case PotentialSpec::Kind::TrapBump: {
      Radial r = gauss_radial(s.c, 1.0 / (s.sigma * s.sigma), x.squaredNorm());
      return Mat(s.omega0 * s.omega0 * Mat::Identity(d, d) + radial_hess(r, x));
    }
  }
  return zero_mat(d);
}

Tensor3 third_V(const PotentialSpec& s, double t, const Vec& x) {
  (void)t;
  switch (s.kind) {
    case PotentialSpec::Kind::Bump:
    case PotentialSpec::Kind::TrapBump: {
      Radial r = gauss_radial(s.c, 1.0 / (s.sigma * s.sigma), x.squaredNorm());
      return radial_third(r, x);
    }
    default: return Tensor3::zero(int(x.size()));
  }
}

// ---------- KernelSpec ----------

KernelSpec KernelSpec::zero(int d) {
  KernelSpec s;
  s.kind = Kind::Zero;
  s.dim = d;
  return s;
}

KernelSpec KernelSpec::bec(double a1, double a2, double a3, double a4, double A,
                           double B, int d) {
  KernelSpec s;
  s.kind = Kind::BEC;
  s.dim = d;
  s.a1 = a1; s.a2 = a2; s.a3 = a3; s.a4 = a4; s.A = A; s.B = B;
  return s;
}

KernelSpec KernelSpec::gaussian(double lam, double sigma, int d) {
  KernelSpec s;
  s.kind = Kind::Gaussian;
  s.dim = d;
  s.lam = lam;
  s.sigma = sigma;
  return s;
}

KernelSpec KernelSpec::shifted_gaussian(double lam, double sigma, const Vec& x0) {
  KernelSpec s;
  s.kind = Kind::ShiftedGaussian;
  s.dim = int(x0.size());
  s.lam = lam;
  s.sigma = sigma;
  s.x0 = x0;
  return s;
}

KernelSpec KernelSpec::cosine_bump(double lam, double w, int d) {
  if (d != 1) throw std::invalid_argument("cosine_bump: d=1 only");
  KernelSpec s;
  s.kind = Kind::CosineBump;
  s.dim = d;
  s.lam = lam;
  s.w = w;
  return s;
}

std::string KernelSpec::name() const {
  switch (kind) {
    case Kind::Zero: return "zero";
    case Kind::BEC: return "bec";
    case Kind::Gaussian: return "gaussian";
    case Kind::ShiftedGaussian: return "shifted_gaussian";
    case Kind::CosineBump: return "cosine_bump";
  }
  return "?";
}

bool KernelSpec::is_even() const {
  if (kind == Kind::ShiftedGaussian) return x0.isZero(0.0);
  return true;
}

double eval_K(const KernelSpec& s, const Vec& x) {
  switch (s.kind) {
    case KernelSpec::Kind::Zero: return 0;
    case KernelSpec::Kind::BEC: return bec_radial(s, x.squaredNorm()).f;
    case KernelSpec::Kind::Gaussian:
      return s.lam * std::exp(-x.squaredNorm() / (s.sigma * s.sigma));
    case KernelSpec::Kind::ShiftedGaussian: {
      Vec y = x - s.x0;
      return s.lam * std::exp(-y.squaredNorm() / (s.sigma * s.sigma));
    }
    case KernelSpec::Kind::CosineBump: return cosine_bump_1d(s, x[0]).k;
  }
  return 0;
}

double eval_K1(const KernelSpec& s, double x) { return eval_K(s, vec1(x)); }

Vec grad_K(const KernelSpec& s, const Vec& x) {
  switch (s.kind) {
    case KernelSpec::Kind::Zero: return Vec::Zero(x.size());
    case KernelSpec::Kind::BEC:
      return radial_grad(bec_radial(s, x.squaredNorm()), x);
    case KernelSpec::Kind::Gaussian:
      return radial_grad(
          gauss_radial(s.lam, 1.0 / (s.sigma * s.sigma), x.squaredNorm()), x);
    case KernelSpec::Kind::ShiftedGaussian: {
      Vec y = x - s.x0;
      return radial_grad(
          gauss_radial(s.lam, 1.0 / (s.sigma * s.sigma), y.squaredNorm()), y);
    }
    case KernelSpec::Kind::CosineBump: return vec1(cosine_bump_1d(s, x[0]).k1);
  }
  return Vec::Zero(x.size());
}

Mat hess_K(const KernelSpec& s, const Vec& x) {
  int d = int(x.size());
  switch (s.kind) {
    case KernelSpec::Kind::Zero: return zero_mat(d);
    case KernelSpec::Kind::BEC:
      return radial_hess(bec_radial(s, x.squaredNorm()), x);
    case KernelSpec::Kind::Gaussian:
      return radial_hess(
          gauss_radial(s.lam, 1.0 / (s.sigma * s.sigma), x.squaredNorm()), x);
    case KernelSpec::Kind::ShiftedGaussian: {
      Vec y = x - s.x0;
      return radial_hess(
          gauss_radial(s.lam, 1.0 / (s.sigma * s.sigma), y.squaredNorm()), y);
    }
    case KernelSpec::Kind::CosineBump: {
      Mat m(1, 1);
      m(0, 0) = cosine_bump_1d(s, x[0]).k2;
      return m;
    }
  }
  return zero_mat(d);
}

Tensor3 third_K(const KernelSpec& s, const Vec& x) {
  switch (s.kind) {
    case KernelSpec::Kind::Zero: return Tensor3::zero(int(x.size()));
    case KernelSpec::Kind::BEC:
      return radial_third(bec_radial(s, x.squaredNorm()), x);
    case KernelSpec::Kind::Gaussian:
      return radial_third(
          gauss_radial(s.lam, 1.0 / (s.sigma * s.sigma), x.squaredNorm()), x);
    case KernelSpec::Kind::ShiftedGaussian: {
      Vec y = x - s.x0;
      return radial_third(
          gauss_radial(s.lam, 1.0 / (s.sigma * s.sigma), y.squaredNorm()), y);
    }
    case KernelSpec::Kind::CosineBump: {
      Tensor3 t = Tensor3::zero(1);
      t.at(0, 0, 0) = cosine_bump_1d(s, x[0]).k3;
      return t;
    }
  }
  return Tensor3::zero(int(x.size()));
}

// ---------- Taylor remainders ----------

double taylor_remainder_V(const PotentialSpec& s, double t, const Vec& q,
                          const Vec& y, double eps) {
  if (eps < 0) throw std::invalid_argument("taylor_remainder_V: eps >= 0");
  if (eps == 0) return 0.5 * y.dot(hess_V(s, t, q) * y);
  double se = std::sqrt(eps);
  return (eval_V(s, t, q + se * y) - eval_V(s, t, q) -
          se * y.dot(grad_V(s, t, q))) /
         eps;
}

double taylor_remainder_K(const KernelSpec& s, const Vec& shift, const Vec& y,
                          double eps) {
  if (eps < 0) throw std::invalid_argument("taylor_remainder_K: eps >= 0");
  if (eps == 0) return 0.5 * y.dot(hess_K(s, shift) * y);
  double se = std::sqrt(eps);
  return (eval_K(s, shift + se * y) - eval_K(s, shift) -
          se * y.dot(grad_K(s, shift))) /
         eps;
}

ThirdTaylorTerms third_taylor_terms(const PotentialSpec& sv,
                                    const KernelSpec& sk, double t,
                                    const Vec& qj, const Vec& dq, const Vec& y) {
  ThirdTaylorTerms o;
  o.vcal = third_V(sv, t, qj).contract(y) / 6.0;
  o.kcal_diag = third_K(sk, Vec::Zero(y.size())).contract(y) / 6.0;
  o.kcal_off = third_K(sk, dq).contract(y) / 6.0;
  return o;
}

}  // namespace hlab
