#include "spinwire/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinwire {

double AmplitudeLaw::q_at(int j) const {
  switch (kind) {
    case Kind::Geometric:
      return amp * std::pow(ratio, j - 1);
    case Kind::Power:
      return amp * std::pow(static_cast<double>(j), -exponent);
  }
  return 0.0;
}

namespace {

struct ModeSamples {
  ScalarField f, fp, fpp;
};

ModeSamples sample_gaussian_bump(const ScalarField& x, double c, double s) {
  ModeSamples m;
  const auto d = (x.array() - c);
  const auto g = (-d.square() / (2.0 * s * s)).exp();
  const double s2 = s * s;
  m.f = g.matrix();
  m.fp = (-(d / s2) * g).matrix();
  m.fpp = ((d.square() / (s2 * s2) - 1.0 / s2) * g).matrix();
  return m;
}

ModeSamples sample_fourier_envelope(const ScalarField& x, double S, double omega,
                                    bool use_sin) {
  ModeSamples m;
  const auto env = (-x.array().square() / (2.0 * S * S)).exp();
  const auto env_p = (-(x.array() / (S * S))) * env;
  const auto env_pp = (x.array().square() / (S * S * S * S) - 1.0 / (S * S)) * env;
  Eigen::ArrayXd trig, trig_p, trig_pp;
  if (use_sin) {
    trig = (omega * x.array()).sin();
    trig_p = omega * (omega * x.array()).cos();
  } else {
    trig = (omega * x.array()).cos();
    trig_p = -omega * (omega * x.array()).sin();
  }
  trig_pp = -omega * omega * trig;
  m.f = (env * trig).matrix();
  m.fp = (env_p * trig + env * trig_p).matrix();
  m.fpp = (env_pp * trig + 2.0 * env_p * trig_p + env * trig_pp).matrix();
  return m;
}

}  // namespace

NoiseModel build_noise(const NoiseFamilySpec& family, int mode_count,
                       const AmplitudeLaw& law, const WireGrid& grid) {
  if (mode_count < 0) throw std::invalid_argument("build_noise: mode count must be >= 0");
  if (mode_count > 0 && family.kind == NoiseFamilySpec::Kind::None)
    throw std::invalid_argument("build_noise: mode family 'none' cannot carry modes");
  if (mode_count > 0) {
    if (law.amp < 0.0) throw std::invalid_argument("build_noise: amplitude must be >= 0");
    if (law.kind == AmplitudeLaw::Kind::Geometric && mode_count > 1 &&
        std::abs(law.ratio) >= 1.0)
      throw std::invalid_argument(
          "build_noise: geometric amplitude law with |ratio| >= 1 is not square-summable");
    if (law.kind == AmplitudeLaw::Kind::Power && law.exponent <= 0.5)
      throw std::invalid_argument(
          "build_noise: power amplitude law with exponent <= 1/2 is not square-summable");
    if (family.kind == NoiseFamilySpec::Kind::GaussianBumps && !(family.width > 0.0))
      throw std::invalid_argument("build_noise: bump width must be > 0");
    if (family.kind == NoiseFamilySpec::Kind::FourierEnvelope &&
        !(family.envelope_width > 0.0))
      throw std::invalid_argument("build_noise: envelope width must be > 0");
  }

  NoiseModel model;
  const ScalarField x = grid.coords();
  model.kappa_sq = ScalarField::Zero(grid.n);
  model.kappa_kappa_prime = ScalarField::Zero(grid.n);
  ScalarField sup_sum = ScalarField::Zero(grid.n);

  model.modes.reserve(static_cast<std::size_t>(mode_count));
  for (int j = 1; j <= mode_count; ++j) {
    ModeSamples s;
    if (family.kind == NoiseFamilySpec::Kind::GaussianBumps) {
      const double c = family.center + (j - 1) * family.spacing;
      s = sample_gaussian_bump(x, c, family.width);
    } else {
      const double omega = family.omega0 * static_cast<double>((j + 1) / 2);
      s = sample_fourier_envelope(x, family.envelope_width, omega, j % 2 == 0);
    }
    NoiseMode mode;
    mode.q = law.q_at(j);
    mode.f = std::move(s.f);
    mode.f_prime = std::move(s.fp);
    mode.f_double_prime = std::move(s.fpp);
    if (!mode.f.allFinite() || !mode.f_prime.allFinite() || !mode.f_double_prime.allFinite())
      throw std::invalid_argument("build_noise: mode samples are not finite");

    const double q2 = mode.q * mode.q;
    model.kappa_sq += q2 * mode.f.cwiseProduct(mode.f);
    model.kappa_kappa_prime += q2 * mode.f.cwiseProduct(mode.f_prime);
    sup_sum += q2 * (mode.f.array().square() + mode.f_prime.array().square() +
                     mode.f_double_prime.array().square())
                        .matrix();
    model.q_total_sq += q2;
    model.modes.push_back(std::move(mode));
  }
  model.c_kappa = mode_count > 0 ? std::sqrt(sup_sum.maxCoeff()) : 0.0;
  return model;
}

Eigen::VectorXd draw_mode_normals(NoiseStream& rng, int mode_count) {
  Eigen::VectorXd xi(mode_count);
  for (int j = 0; j < mode_count; ++j) xi[j] = rng.normal();
  return xi;
}

ScalarField assemble_increment(const NoiseModel& noise, const Eigen::VectorXd& xi,
                               double dt) {
  if (xi.size() != noise.mode_count())
    throw std::invalid_argument("assemble_increment: xi length does not match mode count");
  if (!(dt > 0.0)) throw std::invalid_argument("assemble_increment: dt must be > 0");
  const Eigen::Index n = noise.kappa_sq.size();
  ScalarField dW = ScalarField::Zero(n);
  const double root_dt = std::sqrt(dt);
  for (int j = 0; j < noise.mode_count(); ++j)
    dW += (noise.modes[j].q * xi[j] * root_dt) * noise.modes[j].f;
  return dW;
}

ScalarField sample_increment(const NoiseModel& noise, double dt, NoiseStream& rng) {
  return assemble_increment(noise, draw_mode_normals(rng, noise.mode_count()), dt);
}

SmallnessReport check_smallness(const NoiseModel& noise, double alpha, double gamma,
                                double p, double delta, double b_p) {
  if (!(p >= 1.0)) throw std::invalid_argument("check_smallness: p must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("check_smallness: delta must be > 0");
  if (!(b_p > 0.0)) throw std::invalid_argument("check_smallness: b_p must be > 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("check_smallness: alpha must be > 0");

  // Sign-preserving power for the report when the damping margin goes negative.
  const auto signed_pow = [](double base, double e) {
    return base >= 0.0 ? std::pow(base, e) : -std::pow(-base, e);
  };

  SmallnessReport r;
  const double ck = noise.c_kappa;
  const double ag = 1.0 + std::abs(gamma);
  const double tail = std::pow(4.0, p - 1.0) * b_p * std::pow(ag, p) * std::pow(ck, p);
  r.c_kappa = ck;
  r.n1p = 1.0 - tail;
  const double margin = alpha - (1.0 + 2.0 * gamma * gamma) * ck * ck - delta;
  r.n2p = std::pow(2.0, p) * signed_pow(margin, p) - tail;
  r.n1_positive = r.n1p > 0.0;
  r.n2_positive = r.n2p > 0.0;

  const double bp_root = std::pow(b_p, 1.0 / p);
  const double bound1 =
      (alpha - delta) /
      (1.0 + 2.0 * gamma * gamma + std::pow(2.0, 1.0 - 2.0 / p) * bp_root * ag);
  const double bound2 = 1.0 / (4.0 * bp_root * ag);
  const double bound3 = 1.0 - delta;
  r.c_kappa_ceiling = std::min({bound1, bound2, bound3});
  r.ceiling_satisfied = ck <= r.c_kappa_ceiling;
  return r;
}

double SpinVelocity::at(double t) const {
  switch (kind) {
    case Kind::Constant:
      return value;
    case Kind::Pulse:
      return (t >= t_on && t < t_off) ? value : 0.0;
    case Kind::Tabulated: {
      if (times.empty()) return 0.0;
      if (t < times.front()) return values.front();
      std::size_t i = 0;
      while (i + 1 < times.size() && times[i + 1] <= t) ++i;
      return values[i];
    }
  }
  return 0.0;
}

double SpinVelocity::c_v() const {
  switch (kind) {
    case Kind::Constant:
    case Kind::Pulse:
      return std::abs(value);
    case Kind::Tabulated: {
      double m = 0.0;
      for (double v : values) m = std::max(m, std::abs(v));
      return m;
    }
  }
  return 0.0;
}

bool SpinVelocity::is_zero() const { return c_v() == 0.0; }

}  // namespace spinwire
