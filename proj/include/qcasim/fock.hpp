#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "qcasim/gates.hpp"

// Brute-force Jordan-Wigner Fock space for short chains, used as an oracle
// for the transfer-matrix algebra. Qubit m carries mode m (site-major, +
// before -); qubit 0 is the most significant bit of a basis index and an
// occupied mode is |1>.
namespace qcasim::fock {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx>;

inline constexpr std::int64_t kMaxSites = 5;

class FockSpace {
public:
  /// 1 <= n_sites <= kMaxSites.
  explicit FockSpace(std::int64_t n_sites);

  std::int64_t n_sites() const { return n_sites_; }
  std::int64_t n_modes() const { return 2 * n_sites_; }
  std::int64_t dimension() const { return std::int64_t{1} << n_modes(); }

  /// phi_m = (prod_{k<m} sz_k) sm_m with sm = |0><1|.
  SparseMatrix field(std::int64_t mode) const;
  Eigen::VectorXcd vacuum() const;

  /// Bit mask of mode m within a basis index.
  std::uint64_t mask(std::int64_t mode) const;

private:
  std::int64_t n_sites_;
};

SparseMatrix jw_field_operator(std::int64_t site, gates::Chirality chirality,
                               std::int64_t n_sites);

/// Largest entry of {phi_i, phi_j^dagger} - delta_ij and {phi_i, phi_j} over
/// all mode pairs.
double anticommutator_defect(const FockSpace& space);

/// Gate in the two-qubit basis |00>, |01>, |10>, |11> of its mode pair, the
/// first qubit being the lower mode.
struct FockGate {
  gates::GateSpec placement;
  Eigen::Matrix4cd local;
};

/// Particle-number-preserving two-qubit matrix of the fermionic gate whose
/// conjugation action on the pair is u: vacuum fixed, one-particle block
/// u^dagger, doubly occupied state times conj(det u).
Eigen::Matrix4cd local_gate_matrix(const Eigen::Matrix2cd& u);

bool is_particle_conserving(const Eigen::Matrix4cd& g, double tol = 1e-12);

/// Transfer block read back from a particle-conserving local matrix. Throws
/// gates::GateError otherwise.
Eigen::Matrix2cd transfer_block(const Eigen::Matrix4cd& g);

FockGate to_fock_gate(const gates::GateSpec& g);

/// Embedding of a gate on adjacent modes, acting as identity elsewhere.
SparseMatrix embed_gate(const FockSpace& space, const FockGate& gate);

/// exp(sum_ab phi_a^dagger X_ab phi_b) with X = -log u over the gate's mode
/// pair, computed densely through a Hermitian eigendecomposition.
Eigen::MatrixXcd exponential_gate(const FockSpace& space, const gates::GateSpec& g);

/// Two-row step on an open chain: B row first, then A row.
Eigen::MatrixXcd fock_unitary(const FockSpace& space, std::span<const FockGate> gates);

struct FockReport {
  double conjugation = 0.0;  // U phi_i U^dagger against sum_j T_ij phi_j
  cplx vacuum_phase{1.0, 0.0};
  double vacuum = 0.0;       // |U|0> - phase |0>| plus | |phase| - 1 |
  double locality = 0.0;     // exponential oracle against I x local x I
  double embedding = 0.0;    // local matrix against the one read off the oracle
  double max() const;
};

/// Open chain with n_sites <= 4. Throws gates::GateError for gates that mix
/// particle-number sectors or sit on non-adjacent modes.
FockReport fock_consistency(std::span<const FockGate> gates, std::int64_t n_sites);
FockReport fock_consistency(std::span<const gates::GateSpec> gates, std::int64_t n_sites);

}  // namespace qcasim::fock
