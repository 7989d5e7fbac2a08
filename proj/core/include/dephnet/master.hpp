// master.hpp — Dephasing Liouvillians, deterministic integration, steady states
//
// Single-excitation generator, acting on vec(rho) with (n,m) -> n*N + m:
//   d<rho_nm>/dz = [i(beta_n - beta_m) - (gamma_n + gamma_m)/2] <rho_nm>
//                + sqrt(gamma_n gamma_m) delta_nm <rho_nm>
//                + i sum_r kappa_nr <rho_rm> - i sum_r kappa_mr <rho_nr>.
//
// Two-excitation generator on ordered pairs, (p,q) -> p*N + q:
//   d<rho_(pq),(p'q')>/dz =
//     [i(beta_p + beta_q - beta_p' - beta_q')
//        - (gamma_p + gamma_q + gamma_p' + gamma_q')/2] rho
//   + [ sqrt(g_p g_p') d_pp' + sqrt(g_p g_q') d_pq'
//     + sqrt(g_q g_p') d_qp' + sqrt(g_q g_q') d_qq'
//     - sqrt(g_p g_q) d_pq  - sqrt(g_p' g_q') d_p'q' ] rho
//   + i sum_r [ k_rp rho_(rq),(p'q') + k_rq rho_(pr),(p'q')
//             - k_rp' rho_(pq),(rq') - k_rq' rho_(pq),(p'r) ].
//
// Both leave the pair-exchange sectors invariant; diagonal and
// exchange-conjugate elements carry zero net dephasing coefficient.

#pragma once

#include "dephnet/network.hpp"
#include "dephnet/record.hpp"

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace dephnet {

struct Liouvillian {
    Eigen::MatrixXcd matrix;  // D x D acting on vec(rho), row-major vec
    MatrixOrder order{MatrixOrder::single};
    int num_sites{0};

    int state_dim() const { return order == MatrixOrder::single ? num_sites : num_sites * num_sites; }
};

Liouvillian build_single_liouvillian(const NetworkSpec& spec);
Liouvillian build_two_liouvillian(const NetworkSpec& spec);

// Right-hand sides evaluated directly from the equations above (term by
// term, no superoperator); the generator-consistency oracle for tests.
Eigen::MatrixXcd single_rhs(const NetworkSpec& spec, const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd two_rhs(const NetworkSpec& spec, const Eigen::MatrixXcd& rho2);

// vec / unvec in the row-major convention used by Liouvillian.
Eigen::VectorXcd vec(const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd unvec(const Eigen::VectorXcd& v, int dim);

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

// Exact-action propagation: exp(L dz) between grid points, via one dense
// eigendecomposition of L (reused for every step and every dz). Falls back
// to scaling-and-squaring if L is too close to defective for the
// eigenvector basis to be trustworthy.
class MasterIntegrator {
public:
    explicit MasterIntegrator(const Liouvillian& liouvillian);

    // rho at z = z0 + dz given rho at z0.
    Eigen::MatrixXcd propagate(const Eigen::MatrixXcd& rho, double dz) const;

    // rho(z) at every grid point (ascending, z >= 0), starting from rho0 at
    // z = 0.
    EvolutionRecord integrate(const Eigen::MatrixXcd& rho0, std::span<const double> z_grid) const;

    bool using_eigenbasis() const { return eigen_ok_; }
    const Liouvillian& liouvillian() const { return liouvillian_; }

private:
    Liouvillian liouvillian_;
    bool eigen_ok_{false};
    Eigen::MatrixXcd v_;
    Eigen::MatrixXcd v_inv_;
    Eigen::VectorXcd eigenvalues_;
};

EvolutionRecord integrate(const Liouvillian& liouvillian, const Eigen::MatrixXcd& rho0,
                          std::span<const double> z_grid);

// Classical RK4 cross-check at fixed step h.
EvolutionRecord integrate_rk4(const Liouvillian& liouvillian, const Eigen::MatrixXcd& rho0,
                              std::span<const double> z_grid, double step = 1e-3);

// ---------------------------------------------------------------------------
// Steady states
// ---------------------------------------------------------------------------

// Exchange-sector restriction for two-particle steady states. `none` keeps
// the full null space (also the single-particle case).
enum class SectorFilter { none, boson, fermion };

struct SteadyStateResult {
    Eigen::MatrixXcd rho;
    int null_space_dimension{0};    // of the full Liouvillian
    int sector_dimension{0};        // after sector projection (== above for none)
    double residual{0.0};           // ||L vec(rho)||_2
};

// Null space via SVD (singular values <= 1e-10 * sigma_max). The returned
// representative is the minimum-Frobenius-norm Hermitian trace-one element
// of the (sector-projected) null space, eigenvalue-clipped at -1e-12 and
// trace-renormalized. Degeneracy is reported, never collapsed silently.
// Throws std::runtime_error if no physical element exists in the sector.
SteadyStateResult steady_state(const Liouvillian& liouvillian,
                               SectorFilter sector = SectorFilter::none);

// ---------------------------------------------------------------------------
// Exchange-sector helpers (pair space)
// ---------------------------------------------------------------------------

// Swap operator E |p,q> = |q,p> on the ordered-pair basis.
Eigen::MatrixXd exchange_operator(int num_sites);
// Project a pair-space density matrix onto the symmetric (boson) or
// antisymmetric (fermion) support: S rho S or A rho A.
Eigen::MatrixXcd project_exchange_sector(const Eigen::MatrixXcd& rho, SectorFilter sector);

}  // namespace dephnet
