#include "qcasim/walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

namespace qcasim::walk {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_state(const FieldState& state, const WalkParams& params) {
  if (state.n_sites() != params.n_sites)
    throw WalkError("state has " + std::to_string(state.n_sites()) + " sites but walk has " +
                    std::to_string(params.n_sites));
}

void apply_step(const std::vector<cplx>& in, std::vector<cplx>& out, std::int64_t n,
                double mu, double zeta) {
  const cplx imu = kI * mu;
  for (std::int64_t s = 0; s < n; ++s) {
    const std::int64_t left = s == 0 ? n - 1 : s - 1;
    const std::int64_t right = s == n - 1 ? 0 : s + 1;
    const auto i = static_cast<std::size_t>(2 * s);
    out[i] = zeta * in[static_cast<std::size_t>(2 * left)] + imu * in[i + 1];
    out[i + 1] = imu * in[i] + zeta * in[static_cast<std::size_t>(2 * right + 1)];
  }
}

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace

WalkParams WalkParams::saturating(std::int64_t n_sites, double mu) {
  WalkParams p{n_sites, mu, std::sqrt(std::max(0.0, 1.0 - mu * mu))};
  p.validate();
  return p;
}

void WalkParams::validate() const {
  if (n_sites <= 0 || n_sites % 2 != 0)
    throw WalkError("n_sites must be a positive even integer, got " + std::to_string(n_sites));
  if (!(mu >= 0.0 && mu <= 1.0)) throw WalkError("mu must lie in [0, 1]");
  if (!(zeta >= 0.0 && zeta <= 1.0)) throw WalkError("zeta must lie in [0, 1]");
  if (zeta * zeta + mu * mu > 1.0 + 1e-14)
    throw WalkError("zeta^2 + mu^2 exceeds 1; no unitary walk exists");
}

bool WalkParams::is_unitary() const { return std::abs(zeta * zeta + mu * mu - 1.0) <= 1e-14; }

FieldState::FieldState(std::int64_t n_sites) : n_sites_(n_sites) {
  if (n_sites <= 0) throw WalkError("field state needs at least one site");
  amp_.assign(static_cast<std::size_t>(2 * n_sites), cplx{});
}

FieldState FieldState::delta(std::int64_t n_sites, std::int64_t site, cplx plus, cplx minus) {
  FieldState s(n_sites);
  s.plus(site) = plus;
  s.minus(site) = minus;
  return s;
}

FieldState FieldState::gaussian(std::int64_t n_sites, double p0, double width, cplx plus,
                                cplx minus) {
  if (!(width > 0.0)) throw WalkError("packet width must be positive");
  FieldState s(n_sites);
  for (std::int64_t i = 0; i < n_sites; ++i) {
    const double x = static_cast<double>(s.position(i));
    const cplx env = std::exp(-x * x / (4.0 * width * width)) * std::exp(kI * (p0 * x));
    s.plus(i) = env * plus;
    s.minus(i) = env * minus;
  }
  const double norm = std::sqrt(s.norm_squared());
  if (!(norm > 0.0)) throw WalkError("packet spinor is zero");
  for (cplx& a : s.amp_) a /= norm;
  return s;
}

FieldState FieldState::random(std::int64_t n_sites, std::uint64_t seed) {
  FieldState s(n_sites);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (cplx& a : s.amp_) a = {normal(rng), normal(rng)};
  const double norm = std::sqrt(s.norm_squared());
  for (cplx& a : s.amp_) a /= norm;
  return s;
}

std::int64_t FieldState::wrap(std::int64_t n) const {
  const std::int64_t r = n % n_sites_;
  return r < 0 ? r + n_sites_ : r;
}

std::int64_t FieldState::position(std::int64_t i) const {
  const std::int64_t w = wrap(i);
  return w >= (n_sites_ + 1) / 2 ? w - n_sites_ : w;
}

double FieldState::site_probability(std::int64_t n) const {
  return std::norm(plus(n)) + std::norm(minus(n));
}

double FieldState::norm_squared() const {
  double sum = 0.0;
  for (const cplx& a : amp_) sum += std::norm(a);
  return sum;
}

double FieldState::mean_position() const {
  double sum = 0.0;
  for (std::int64_t i = 0; i < n_sites_; ++i)
    sum += static_cast<double>(position(i)) * site_probability(i);
  return sum;
}

std::int64_t FieldState::support_radius(double eps) const {
  std::int64_t r = 0;
  for (std::int64_t i = 0; i < n_sites_; ++i)
    if (site_probability(i) > eps) r = std::max(r, std::abs(position(i)));
  return r;
}

FieldState FieldState::mirrored() const {
  FieldState out(n_sites_);
  for (std::int64_t n = 0; n < n_sites_; ++n) {
    out.plus(n) = minus(-n);
    out.minus(n) = plus(-n);
  }
  return out;
}

FieldState FieldState::shifted(std::int64_t by) const {
  FieldState out(n_sites_);
  for (std::int64_t n = 0; n < n_sites_; ++n) {
    out.plus(n + by) = plus(n);
    out.minus(n + by) = minus(n);
  }
  return out;
}

double FieldState::distance(const FieldState& other) const {
  if (other.n_sites_ != n_sites_) throw WalkError("cannot compare states of different sizes");
  double sum = 0.0;
  for (std::size_t i = 0; i < amp_.size(); ++i) sum += std::norm(amp_[i] - other.amp_[i]);
  return std::sqrt(sum);
}

FieldState step(const FieldState& state, const WalkParams& params) {
  check_state(state, params);
  FieldState out(state.n_sites());
  apply_step(state.amplitudes(), out.amplitudes(), state.n_sites(), params.mu, params.zeta);
  return out;
}

FieldState evolve(FieldState state, const WalkParams& params, std::int64_t steps) {
  if (steps < 0) throw WalkError("steps must be non-negative");
  check_state(state, params);
  std::vector<cplx> scratch(state.amplitudes().size());
  for (std::int64_t k = 0; k < steps; ++k) {
    apply_step(state.amplitudes(), scratch, state.n_sites(), params.mu, params.zeta);
    state.amplitudes().swap(scratch);
  }
  return state;
}

Eigen::Matrix2cd momentum_block(const WalkParams& params, double p) {
  Eigen::Matrix2cd m;
  m << params.zeta * std::exp(-kI * p), kI * params.mu, kI * params.mu,
      params.zeta * std::exp(kI * p);
  return m;
}

FieldState step_momentum(const FieldState& state, const WalkParams& params) {
  check_state(state, params);
  const std::int64_t n = state.n_sites();
  std::vector<cplx> plus(static_cast<std::size_t>(n)), minus(plus.size());
  for (std::int64_t s = 0; s < n; ++s) {
    plus[static_cast<std::size_t>(s)] = state.plus(s);
    minus[static_cast<std::size_t>(s)] = state.minus(s);
  }
  Eigen::FFT<double> fft;
  std::vector<cplx> plus_k, minus_k;
  fft.fwd(plus_k, plus);
  fft.fwd(minus_k, minus);
  for (std::int64_t j = 0; j < n; ++j) {
    const double p = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    const Eigen::Matrix2cd m = momentum_block(params, p);
    const auto i = static_cast<std::size_t>(j);
    const cplx a = plus_k[i], b = minus_k[i];
    plus_k[i] = m(0, 0) * a + m(0, 1) * b;
    minus_k[i] = m(1, 0) * a + m(1, 1) * b;
  }
  fft.inv(plus, plus_k);
  fft.inv(minus, minus_k);
  FieldState out(n);
  for (std::int64_t s = 0; s < n; ++s) {
    out.plus(s) = plus[static_cast<std::size_t>(s)];
    out.minus(s) = minus[static_cast<std::size_t>(s)];
  }
  return out;
}

Eigen::MatrixXcd dense_step_matrix(const WalkParams& params) {
  params.validate();
  const std::int64_t n = params.n_sites;
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  for (std::int64_t s = 0; s < n; ++s) {
    const std::int64_t left = (s + n - 1) % n;
    const std::int64_t right = (s + 1) % n;
    w(2 * s, 2 * left) += params.zeta;
    w(2 * s, 2 * s + 1) += kI * params.mu;
    w(2 * s + 1, 2 * s) += kI * params.mu;
    w(2 * s + 1, 2 * right + 1) += params.zeta;
  }
  return w;
}

double band_energy(const WalkParams& params, double p) {
  return std::acos(std::clamp(params.zeta * std::cos(p), -1.0, 1.0));
}

double group_velocity(const WalkParams& params, double p) {
  const double s = std::sin(band_energy(params, p));
  if (s == 0.0) return 0.0;  // only at zeta = 1, p in {0, pi}: the cusp of |p|
  return params.zeta * std::sin(p) / s;
}

std::vector<DispersionPoint> dispersion(const WalkParams& params) {
  params.validate();
  const std::int64_t n = params.n_sites;
  std::vector<DispersionPoint> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t j = -n / 2; j < n / 2; ++j) {
    const double p = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    out.push_back({p, band_energy(params, p), group_velocity(params, p)});
  }
  return out;
}

GroupVelocityMax group_velocity_max(const WalkParams& params) {
  const auto table = dispersion(params);
  GroupVelocityMax g{params.zeta, 0.0};
  const double dp = 2.0 * std::numbers::pi / static_cast<double>(params.n_sites);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double next = i + 1 < table.size() ? table[i + 1].energy : table.front().energy;
    g.measured = std::max(g.measured, std::abs(next - table[i].energy) / dp);
  }
  return g;
}

double front_speed(const WalkParams& params, std::int64_t steps, double eps) {
  params.validate();
  if (steps < 1) throw WalkError("front speed needs at least one step");
  if (!(eps > 0.0 && eps < 1.0)) throw WalkError("eps must lie in (0, 1)");
  if (params.n_sites <= 2 * steps)
    throw WalkError("n_sites must exceed 2 * steps so the front cannot wrap around");
  const FieldState end = evolve(FieldState::delta(params.n_sites, 0, 1.0, 0.0), params, steps);
  std::int64_t front = 0;
  for (std::int64_t i = 0; i < end.n_sites(); ++i)
    if (end.site_probability(i) > eps) front = std::max(front, end.position(i));
  return static_cast<double>(front) / static_cast<double>(steps);
}

ZitterResult zitter_frequency(const WalkParams& params, double p0, double width,
                              std::int64_t steps) {
  params.validate();
  if (steps < kMinZitterSteps)
    throw ResolutionError("zitterbewegung analysis needs at least " +
                          std::to_string(kMinZitterSteps) + " steps, got " +
                          std::to_string(steps));

  ZitterResult r;
  r.expected = 2.0 * band_energy(params, p0);
  r.resolution = 2.0 * std::numbers::pi / static_cast<double>(steps);

  const cplx c = 1.0 / std::sqrt(2.0);
  FieldState s = FieldState::gaussian(params.n_sites, p0, width, c, kI * c);
  std::vector<cplx> scratch(s.amplitudes().size());
  r.mean_position.reserve(static_cast<std::size_t>(steps));
  r.norm.reserve(static_cast<std::size_t>(steps));
  for (std::int64_t k = 0; k < steps; ++k) {
    r.mean_position.push_back(s.mean_position());
    r.norm.push_back(s.norm_squared());
    apply_step(s.amplitudes(), scratch, s.n_sites(), params.mu, params.zeta);
    s.amplitudes().swap(scratch);
  }

  // Remove the drift of the packet, then look for the strongest line.
  const auto n = static_cast<std::size_t>(steps);
  double st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double td = static_cast<double>(t);
    st += td;
    sx += r.mean_position[t];
    stt += td * td;
    stx += td * r.mean_position[t];
  }
  const double nd = static_cast<double>(n);
  const double slope = (nd * stx - st * sx) / (nd * stt - st * st);
  const double icpt = (sx - slope * st) / nd;

  const std::size_t padded = 16 * n;
  std::vector<double> signal(padded, 0.0);
  double window_sum = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double w =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(t) / (nd - 1.0));
    window_sum += w;
    signal[t] = w * (r.mean_position[t] - (icpt + slope * static_cast<double>(t)));
  }
  Eigen::FFT<double> fft;
  std::vector<cplx> spectrum;
  fft.fwd(spectrum, signal);
  std::size_t best = 1;
  for (std::size_t k = 1; k <= padded / 2; ++k)
    if (std::abs(spectrum[k]) > std::abs(spectrum[best])) best = k;
  r.frequency = 2.0 * std::numbers::pi * static_cast<double>(best) / static_cast<double>(padded);
  r.amplitude = std::abs(spectrum[best]) / window_sum;
  r.detected = r.amplitude > kZitterNoiseFloor;
  return r;
}

Eigen::Matrix2cd coarse_grained_generator(const WalkParams& params, double p, std::int64_t k) {
  if (k < 1) throw WalkError("coarse-graining window k must be at least 1");
  const Eigen::Matrix2cd m = momentum_block(params, p);
  Eigen::Matrix2cd fwd = Eigen::Matrix2cd::Identity();
  for (std::int64_t i = 0; i < k; ++i) fwd = m * fwd;
  const Eigen::Matrix2cd bwd = fwd.adjoint();  // exact inverse for a unitary block
  return kI * (fwd - bwd) / (2.0 * static_cast<double>(k));
}

Eigen::Matrix2cd coarse_grained_generator_closed_form(const WalkParams& params, double p,
                                                      std::int64_t k) {
  if (k < 1) throw WalkError("coarse-graining window k must be at least 1");
  const double e = band_energy(params, p);
  const double kd = static_cast<double>(k);
  const double s = std::sin(e);
  const double ratio = s == 0.0 ? std::cos(kd * e) / std::cos(e) : std::sin(kd * e) / (kd * s);
  return ratio * (params.zeta * std::sin(p) * pauli_z() - params.mu * pauli_x());
}

Eigen::Matrix2cd dirac_generator(const WalkParams& params, double p) {
  return params.zeta * p * pauli_z() - params.mu * pauli_x();
}

double effective_hamiltonian_check(const WalkParams& params, std::int64_t k) {
  params.validate();
  double worst = 0.0;
  for (const auto& pt : dispersion(params)) {
    const Eigen::Matrix2cd d = coarse_grained_generator(params, pt.p, k) -
                               coarse_grained_generator_closed_form(params, pt.p, k);
    worst = std::max(worst, d.jacobiSvd().singularValues()(0));
  }
  return worst;
}

SmallParameterFit small_parameter_fit(std::int64_t k, int samples) {
  if (samples < 2) throw WalkError("slope fit needs at least two samples");
  SmallParameterFit fit;
  for (int i = 0; i < samples; ++i) {
    // Geometric spacing of |p| + mu over [1e-3, 1e-1).
    const double s = 1e-3 * std::pow(100.0, static_cast<double>(i) / samples);
    const WalkParams params = WalkParams::saturating(2, s / 2.0);
    const Eigen::Matrix2cd d =
        coarse_grained_generator(params, s / 2.0, k) - dirac_generator(params, s / 2.0);
    fit.scale.push_back(s);
    fit.deviation.push_back(d.jacobiSvd().singularValues()(0));
  }
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < samples; ++i) {
    mx += std::log(fit.scale[static_cast<std::size_t>(i)]);
    my += std::log(fit.deviation[static_cast<std::size_t>(i)]);
  }
  mx /= samples;
  my /= samples;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double dx = std::log(fit.scale[static_cast<std::size_t>(i)]) - mx;
    sxy += dx * (std::log(fit.deviation[static_cast<std::size_t>(i)]) - my);
    sxx += dx * dx;
  }
  fit.slope = sxy / sxx;
  return fit;
}

}  // namespace qcasim::walk
