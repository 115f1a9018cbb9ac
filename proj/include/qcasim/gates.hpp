#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include "json.hpp"

// Bipartite gate circuits for the field at the single-particle level. A
// particle-conserving circuit acts on the field operators linearly,
// U phi_i U^dagger = sum_j T_ij phi_j, so each circuit is represented by its
// transfer matrix T over the 2 n_sites modes.
namespace qcasim::gates {

using cplx = std::complex<double>;
using TransferMatrix = Eigen::MatrixXcd;

class GateError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class Chirality { plus, minus };

/// Site-major, + before -: (0,+), (0,-), (1,+), (1,-), ...
struct ModeIndex {
  std::int64_t site = 0;
  Chirality chirality = Chirality::plus;

  std::int64_t flat() const { return 2 * site + (chirality == Chirality::minus ? 1 : 0); }
  static ModeIndex from_flat(std::int64_t i);
};

enum class GateKind { A, B };
enum class Boundary { open, periodic };
enum class Direction { forward, backward };

/// A acts on ((n,-), (n+1,+)); B acts on ((n,+), (n,-)). The 2x2 unitary u
/// is the transfer block of the gate on its ordered mode pair.
struct GateSpec {
  GateKind kind = GateKind::A;
  std::int64_t site = 0;
  Eigen::Matrix2cd unitary = Eigen::Matrix2cd::Identity();

  /// Flat indices of the ordered mode pair; A at the last site wraps to mode 0.
  std::pair<std::int64_t, std::int64_t> modes(std::int64_t n_sites) const;
};

bool is_unitary(const Eigen::MatrixXcd& m, double tol);

Eigen::Matrix2cd swap_gate();

/// One gate of each kind at every site (A at every site but the last on an
/// open chain).
std::vector<GateSpec> tile_gates(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b,
                                 std::int64_t n_sites, Boundary boundary);

/// Transfer matrix of a single layer of non-overlapping gates.
TransferMatrix layer_transfer(std::span<const GateSpec> gates, std::int64_t n_sites,
                              Boundary boundary);

/// Transfer matrix of the two-row step: the B row acts first, then the A
/// row. The backward direction gives the transfer of U^dagger phi U, the
/// inverse of the forward one. Throws GateError on non-unitary gates,
/// out-of-range sites, wrap-around A gates on an open chain and gates of one
/// kind sharing a mode.
TransferMatrix compose_row(std::span<const GateSpec> gates, Direction direction,
                           std::int64_t n_sites, Boundary boundary = Boundary::periodic);

/// Amplitudes of row (n,+) of a transfer matrix.
struct RowSpec {
  cplx eta;    // on (n,+)
  cplx zeta;   // on (n+1,+) forward, (n-1,+) backward
  cplx gamma;  // on (n,-)
  std::vector<std::pair<ModeIndex, cplx>> residual_terms;  // everything else above 1e-14

  double norm_squared() const;
};

RowSpec extract_row_amplitudes(const TransferMatrix& t, std::int64_t site,
                               Direction direction = Direction::forward);

/// Largest l2 distance, over sites at least `margin` from either chain end,
/// between row(Tf) - row(Tb) at (n,+) and
///   zeta (e_{n+1,+} - e_{n-1,+}) - 4 i (a / lambda) e_{n,-}.
double check_fb_combination(const TransferMatrix& tf, const TransferMatrix& tb,
                            double zeta_target, double a_over_lambda, std::int64_t margin = 0);

enum class SolveStatus { feasible, infeasible, not_converged };

std::string to_string(SolveStatus s);

struct SolveOptions {
  int restarts = 20;
  std::uint64_t seed = 1;
  double tolerance = 1e-8;       // residual accepted as a solution
  double infeasible_floor = 1e-6;  // best residual above this certifies infeasibility
};

struct SolveResult {
  SolveStatus status = SolveStatus::not_converged;
  double residual = 0.0;  // best residual over all restarts
  int restarts_run = 0;
  std::uint64_t seed = 0;
  Eigen::Matrix2cd a = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd b = Eigen::Matrix2cd::Identity();
};

/// Multi-start Levenberg-Marquardt search over one A and one B gate in U(2),
/// tiled translation-invariantly, for a forward/backward step whose row
/// combination hits the target with mu = 2a / lambda. Stops at the first
/// restart that reaches the tolerance. Infeasibility is a statistical
/// certificate: every restart stalled above the floor.
SolveResult solve_gates(double zeta, double mu, const SolveOptions& options = {});

/// Residual of the fb combination for the tiled pair on a periodic ring.
double tiled_residual(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b, double zeta,
                      double mu);

/// U(2) element exp(i phase) [[e^{i alpha} cos theta, e^{i beta} sin theta],
///                            [-e^{-i beta} sin theta, e^{-i alpha} cos theta]].
Eigen::Matrix2cd u2(double phase, double theta, double alpha, double beta);

struct RefractionBound {
  double zeta_max = 1.0;        // sqrt(1 - mu^2)
  double n_min = 1.0;           // 1 / zeta_max, infinite at mu = 1
  double printed_bound = 1.0;   // weaker form 1/zeta >= sqrt(1 - mu^2), kept for comparison
};

/// Throws GateError for mu outside [0, 1].
RefractionBound refraction_bound(double mu);

nlohmann::json to_json(const GateSpec& g);
GateSpec gate_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SolveResult& r);

}  // namespace qcasim::gates
