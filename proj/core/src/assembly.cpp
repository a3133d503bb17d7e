#include "hartreelab/assembly.hpp"

#include <cmath>
#include <stdexcept>

namespace hlab {

AmplitudeSpec AmplitudeSpec::zero() {
  AmplitudeSpec a;
  a.kind = Kind::Zero;
  return a;
}

AmplitudeSpec AmplitudeSpec::gaussian(double sigma, double beta, double shift) {
  AmplitudeSpec a;
  a.kind = Kind::Gaussian;
  a.sigma = sigma;
  a.beta = beta;
  a.shift = shift;
  return a;
}

AmplitudeSpec AmplitudeSpec::heavy_tail(double p, double beta) {
  AmplitudeSpec a;
  a.kind = Kind::HeavyTail;
  a.p = p;
  a.beta = beta;
  return a;
}

cplx AmplitudeSpec::eval(double y) const {
  switch (kind) {
    case Kind::Zero: return 0;
    case Kind::Gaussian: {
      double z = (y - shift) / sigma;
      double mod = amp * std::pow(M_PI, -0.25) / std::sqrt(sigma) *
                   std::exp(-0.5 * z * z);
      return mod * std::exp(cplx(0, beta * y));
    }
    case Kind::HeavyTail: {
      double mod = amp * std::pow(1.0 + y * y, -0.5 * p);
      return mod * std::exp(cplx(0, beta * y));
    }
  }
  return 0;
}

SpectralField sample_amplitude(const AmplitudeSpec& a, const Grid& g) {
  SpectralField f = sample_field(g, [&](const Vec& x) { return a.eval(x[0]); });
  if (a.kind == AmplitudeSpec::Kind::HeavyTail) {
    double n = l2_norm(f);
    if (n > 0)
      for (auto& z : f.v) z *= a.amp / n;
  }
  return f;
}

AssembledState initial_data(const std::vector<AmplitudeSpec>& amps,
                            const std::vector<Vec>& q0,
                            const std::vector<Vec>& p0, double eps,
                            const Grid& xgrid) {
  if (xgrid.dim != 1) throw std::invalid_argument("initial_data: d=1 only");
  AssembledState st;
  st.psi = SpectralField(xgrid);
  st.eps = eps;
  st.t = 0;
  double se = std::sqrt(eps);
  double scale = std::pow(eps, -0.25);
  for (std::size_t j = 0; j < amps.size(); ++j) {
    if (amps[j].is_zero()) continue;
    for (int m = 0; m < xgrid.ax[0].n; ++m) {
      double x = xgrid.ax[0].point(m);
      double dx = x - q0[j][0];
      st.psi.v[m] += scale * amps[j].eval(dx / se) *
                     std::exp(cplx(0, dx * p0[j][0] / eps));
    }
  }
  double out = mass_outside_half_box(st.psi);
  if (out > 1e-8)
    throw std::runtime_error(
        "initial_data: packet mass outside the central half box exceeds 1e-8");
  return st;
}

AssembledState assemble(const std::vector<WavePacketFrame>& frames, double eps,
                        const Grid& xgrid, double t, bool with_theta) {
  if (xgrid.dim != 1) throw std::invalid_argument("assemble: d=1 only");
  double h = xgrid.ax[0].h();
  for (const auto& fr : frames) {
    double pn = fr.p.norm();
    if (pn > 0 && h > (2.0 * M_PI / pn) * eps / 8.0)
      throw std::runtime_error(
          "assemble: x-grid does not resolve e^{ip.x/eps} (need h <= "
          "(2pi/|p|) eps/8)");
  }
  AssembledState st;
  st.psi = SpectralField(xgrid);
  st.eps = eps;
  st.t = t;
  double se = std::sqrt(eps);
  double scale = std::pow(eps, -0.25);
  int n = xgrid.ax[0].n;
  std::vector<double> ys(n);
  for (const auto& fr : frames) {
    if (!fr.u) throw std::invalid_argument("assemble: missing envelope");
    for (int m = 0; m < n; ++m)
      ys[m] = (xgrid.ax[0].point(m) - fr.q[0]) / se;
    auto uv = interpolate_zero_extended(*fr.u, ys);
    double th = with_theta ? fr.theta : 0.0;
    for (int m = 0; m < n; ++m) {
      if (uv[m] == cplx(0)) continue;
      double dx = xgrid.ax[0].point(m) - fr.q[0];
      st.psi.v[m] += scale * uv[m] *
                     std::exp(cplx(0, (fr.S + fr.p[0] * dx) / eps + th));
    }
  }
  return st;
}

double l2_error(const AssembledState& a, const AssembledState& b) {
  if (a.psi.grid != b.psi.grid)
    throw std::invalid_argument("l2_error: grid mismatch");
  if (a.eps != b.eps) throw std::invalid_argument("l2_error: eps mismatch");
  return l2_distance(a.psi, b.psi);
}

double bump_window(double r) {
  double x = std::abs(r);
  if (x <= 0.5) return 1.0;
  if (x >= 1.0) return 0.0;
  auto g = [](double s) { return std::exp(-1.0 / s); };
  double u = 2.0 * (x - 0.5);  // in (0,1)
  return g(1.0 - u) / (g(1.0 - u) + g(u));
}

std::vector<PacketObservables> packet_observables(const AssembledState& st,
                                                  const std::vector<Vec>& centers,
                                                  double radius) {
  const Grid& g = st.psi.grid;
  if (g.dim != 1) throw std::invalid_argument("packet_observables: d=1 only");
  for (std::size_t a = 0; a < centers.size(); ++a)
    for (std::size_t b = a + 1; b < centers.size(); ++b)
      if ((centers[a] - centers[b]).norm() <= 2 * radius)
        throw std::invalid_argument("packet_observables: windows overlap");
  std::vector<PacketObservables> out;
  int n = g.ax[0].n;
  for (const auto& c : centers) {
    SpectralField w(g);
    for (int m = 0; m < n; ++m) {
      double r = (g.ax[0].point(m) - c[0]) / radius;
      w.v[m] = bump_window(r) * st.psi.v[m];
    }
    PacketObservables o;
    double mass = 0, cent = 0;
    for (int m = 0; m < n; ++m) {
      double d = std::norm(w.v[m]);
      mass += d;
      cent += g.ax[0].point(m) * d;
    }
    mass *= g.cell();
    cent *= g.cell();
    o.mass = mass;
    o.centroid = vec1(mass > 0 ? cent / mass : 0.0);
    // momentum centroid: eps times the spectral centroid of w psi
    auto coef = fft(w);
    double num = 0, den = 0;
    for (int k = 0; k < n; ++k) {
      double d = std::norm(coef[k]);
      num += g.ax[0].freq(k) * d;
      den += d;
    }
    o.momentum_centroid = vec1(den > 0 ? st.eps * num / den : 0.0);
    out.push_back(o);
  }
  return out;
}

}  // namespace hlab
