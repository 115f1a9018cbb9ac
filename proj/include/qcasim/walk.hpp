#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

// One-particle sector of the zigzag field: a two-component coupled walk on a
// periodic lattice. One step spans two chronons and one site two topons.
//
//   (W psi)+_n = zeta psi+_{n-1} + i mu psi-_n
//   (W psi)-_n = i mu psi+_n     + zeta psi-_{n+1}
namespace qcasim::walk {

using cplx = std::complex<double>;

class WalkError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct WalkParams {
  std::int64_t n_sites = 0;
  double mu = 0.0;    // mass coupling, 2a / lambda
  double zeta = 1.0;  // speed in units of c

  /// zeta = sqrt(1 - mu^2), the unitary walk.
  static WalkParams saturating(std::int64_t n_sites, double mu);

  /// Throws WalkError unless n_sites is even and positive, mu and zeta lie in
  /// [0, 1] and zeta^2 + mu^2 <= 1.
  void validate() const;
  /// zeta^2 + mu^2 == 1 within 1e-14. Sub-saturating walks shrink the norm.
  bool is_unitary() const;
};

/// Amplitudes interleaved per site: [psi+_0, psi-_0, psi+_1, psi-_1, ...].
class FieldState {
public:
  explicit FieldState(std::int64_t n_sites);

  static FieldState delta(std::int64_t n_sites, std::int64_t site, cplx plus, cplx minus);
  /// Normalized Gaussian packet exp(-(n-c)^2 / (4 width^2) + i p0 n) times the
  /// chirality spinor, with sites indexed so that n runs over [-N/2, N/2).
  static FieldState gaussian(std::int64_t n_sites, double p0, double width, cplx plus,
                             cplx minus);
  /// Normalized state with independent standard normal components.
  static FieldState random(std::int64_t n_sites, std::uint64_t seed);

  std::int64_t n_sites() const { return n_sites_; }
  cplx& plus(std::int64_t n) { return amp_[static_cast<std::size_t>(2 * wrap(n))]; }
  cplx& minus(std::int64_t n) { return amp_[static_cast<std::size_t>(2 * wrap(n) + 1)]; }
  cplx plus(std::int64_t n) const { return amp_[static_cast<std::size_t>(2 * wrap(n))]; }
  cplx minus(std::int64_t n) const { return amp_[static_cast<std::size_t>(2 * wrap(n) + 1)]; }

  std::vector<cplx>& amplitudes() { return amp_; }
  const std::vector<cplx>& amplitudes() const { return amp_; }

  /// Site index in [0, N).
  std::int64_t wrap(std::int64_t n) const;
  /// Lattice position of site index i, in [-N/2, N/2).
  std::int64_t position(std::int64_t i) const;

  double site_probability(std::int64_t n) const;
  double norm_squared() const;
  double mean_position() const;
  /// Largest |position| whose site probability exceeds eps.
  std::int64_t support_radius(double eps) const;

  /// psi+_n -> psi-_{-n}, psi-_n -> psi+_{-n}.
  FieldState mirrored() const;
  /// Cyclic translation by `by` sites.
  FieldState shifted(std::int64_t by) const;

  double distance(const FieldState& other) const;

private:
  std::int64_t n_sites_;
  std::vector<cplx> amp_;
};

FieldState step(const FieldState& state, const WalkParams& params);
FieldState evolve(FieldState state, const WalkParams& params, std::int64_t steps);
/// Same step through the momentum representation (FFT, 2x2 block per p).
FieldState step_momentum(const FieldState& state, const WalkParams& params);
/// Explicit 2N x 2N matrix of one step in the interleaved basis.
Eigen::MatrixXcd dense_step_matrix(const WalkParams& params);

/// 2x2 step block acting on (psi+, psi-) for plane waves exp(i p n).
Eigen::Matrix2cd momentum_block(const WalkParams& params, double p);

struct DispersionPoint {
  double p = 0.0;
  double energy = 0.0;          // cos E = zeta cos p, E in [0, pi]
  double group_velocity = 0.0;  // dE/dp
};

double band_energy(const WalkParams& params, double p);
double group_velocity(const WalkParams& params, double p);
/// All lattice momenta 2 pi j / N, in increasing order over [-pi, pi).
std::vector<DispersionPoint> dispersion(const WalkParams& params);

struct GroupVelocityMax {
  double analytic = 0.0;  // zeta
  double measured = 0.0;  // largest finite difference of E on the lattice
};

GroupVelocityMax group_velocity_max(const WalkParams& params);

/// Furthest site with probability above eps after `steps` steps from a
/// delta in psi+ at the origin, divided by steps. Needs n_sites > 2 steps so
/// the front cannot wrap.
double front_speed(const WalkParams& params, std::int64_t steps, double eps);

struct ZitterResult {
  double frequency = 0.0;  // rad/step, location of the spectral peak
  double amplitude = 0.0;  // peak magnitude of the windowed spectrum
  double expected = 0.0;   // 2 E(p0)
  double resolution = 0.0; // 2 pi / steps
  bool detected = false;   // peak above the numerical noise floor
  std::vector<double> mean_position;  // <x>(t) for t = 0 .. steps-1
  std::vector<double> norm;           // norm^2 at the same times
};

/// Throws when steps is below the minimum needed to resolve a spectral line.
class ResolutionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::int64_t kMinZitterSteps = 64;
inline constexpr double kZitterNoiseFloor = 1e-8;

/// Oscillation frequency of <x>(t) for a Gaussian packet with chirality
/// spinor (1, i)/sqrt(2): detrended, Hann-windowed, zero-padded DFT peak.
ZitterResult zitter_frequency(const WalkParams& params, double p0, double width,
                              std::int64_t steps);

/// i (W^k - W^-k) / (2k) of one momentum block.
Eigen::Matrix2cd coarse_grained_generator(const WalkParams& params, double p, std::int64_t k);
/// sin(kE) / (k sin E) (zeta sin p sz - mu sx), with the sin E = 0 limit
/// taken analytically.
Eigen::Matrix2cd coarse_grained_generator_closed_form(const WalkParams& params, double p,
                                                      std::int64_t k);
/// zeta p sz - mu sx, the dimensionless Dirac generator.
Eigen::Matrix2cd dirac_generator(const WalkParams& params, double p);

/// Largest spectral-norm gap between the two generator forms over all
/// lattice momenta.
double effective_hamiltonian_check(const WalkParams& params, std::int64_t k);

struct SmallParameterFit {
  double slope = 0.0;  // log-log slope of deviation against |p| + mu
  std::vector<double> scale;
  std::vector<double> deviation;
};

/// Deviation of the k = 1 coarse-grained generator from the Dirac generator
/// along the ray p = mu = s / 2, s in (0, 0.1) with saturating zeta.
SmallParameterFit small_parameter_fit(std::int64_t k, int samples = 12);

}  // namespace qcasim::walk
