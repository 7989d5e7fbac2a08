// trajectory.hpp — Stochastic-propagator integration and ensemble reduction
//
// Two integration schemes, matching the two noise modes:
//  * piecewise_constant: within each segment the generator
//    H_s = diag(beta + phi_s) + kappa is frozen, and the step is the exact
//    unitary exp(i H_s dz) (eigendecomposition per segment; N is small).
//    Unitary to round-off, so per-realization norm is conserved.
//  * wiener: fixed-step Ito-Euler,
//      U += h (i diag(beta) + i kappa - diag(gamma)/2) U + i diag(sqrt(gamma) dW) U,
//    first order, no renormalization by default (the -gamma/2 drift
//    compensates the noise in mean).
// Output grid points need not align with segments; stepping subdivides
// exactly at grid points, treating the detuning as frozen across the
// subdivision (exact for the piecewise model; the discretization itself for
// the wiener model).

#pragma once

#include "dephnet/network.hpp"
#include "dephnet/noise.hpp"
#include "dephnet/record.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace dephnet {

struct PropagatorSeries {
    std::vector<double> z;
    std::vector<Eigen::MatrixXcd> U;  // U(0) = identity
};

struct AmplitudeSeries {
    std::vector<double> z;
    std::vector<Eigen::VectorXcd> psi;
};

struct IntegrationOptions {
    bool renormalize{false};  // wiener mode diagnostic: rescale to unit norm each step
};

// Full impulse response U(z) for one realization at each grid point.
// z_grid must be ascending and start at 0; the noise must cover max(z_grid).
PropagatorSeries evolve_propagator(const NetworkSpec& spec, const NoiseRealization& noise,
                                   std::span<const double> z_grid,
                                   const IntegrationOptions& opts = {});

// Single-amplitude evolution for the same realization; psi(z) = U(z) psi0.
AmplitudeSeries evolve_amplitude(const NetworkSpec& spec, const NoiseRealization& noise,
                                 const Eigen::VectorXcd& psi0, std::span<const double> z_grid,
                                 const IntegrationOptions& opts = {});

// ---------------------------------------------------------------------------
// Multi-particle amplitudes
// ---------------------------------------------------------------------------

// Pair statistics for amplitude symmetrization (no "distinguishable" here:
// unsymmetrized evolution is U phi U^T directly).
enum class PairStatistics { boson, fermion };

// Psi_{p,q} = sum_{m,n} phi_{m,n} (U_{p,n} U_{q,m} +/- U_{p,m} U_{q,n})
//           = U (phi^T +/- phi) U^T.
// Returned unnormalized; the total probability sum |Psi|^2 equals
// symmetrized_norm2(phi, statistics) at every z for unitary U. Throws on a
// degenerate input (identically zero symmetrization, e.g. fermion phi
// supported only on the diagonal).
Eigen::MatrixXcd two_particle_amplitude(const Eigen::MatrixXcd& U, const Eigen::MatrixXcd& phi,
                                        PairStatistics statistics);

// ||phi^T +/- phi||_F^2, the conserved total probability of the raw
// symmetrized amplitude.
double symmetrized_norm2(const Eigen::MatrixXcd& phi, PairStatistics statistics);

// Rank-k bosonic amplitude, flat row-major multi-index tensors:
// Psi_{p1..pk} = sum_{a1..ak} phi_{a1..ak} sum_{perm pi} prod_i U_{p_{pi(i)}, a_i}.
// All k! permutations of the output multi-index. k in [1, 4]; reduces to the
// boson case of two_particle_amplitude at k = 2. Throws unsupported-size on
// k > 4.
Eigen::VectorXcd n_particle_amplitude(const Eigen::MatrixXcd& U, const Eigen::VectorXcd& phi,
                                      int num_particles);

// ---------------------------------------------------------------------------
// Ensemble reduction
// ---------------------------------------------------------------------------

// Mean outer product with per-entry standard errors of the mean (real and
// imaginary parts separately).
struct EnsembleMoment {
    Eigen::MatrixXcd mean;
    Eigen::MatrixXd se_real;
    Eigen::MatrixXd se_imag;
};

struct EnsembleResult {
    std::vector<double> z;
    std::vector<EnsembleMoment> rho;  // one per z
    std::uint64_t trajectories{0};
    std::uint64_t seed{0};
};

// Streaming accumulator for <v v^dagger>. Merge order is fixed by the caller
// (see run_*_ensemble) so reductions are bit-stable.
class OuterProductAccumulator {
public:
    OuterProductAccumulator(int dim, std::size_t grid_points);
    // Add |v|'s outer product for grid point k.
    void add(std::size_t k, const Eigen::VectorXcd& v);
    void merge(const OuterProductAccumulator& other);
    EnsembleResult finalize(std::span<const double> z_grid) const;
    std::uint64_t count() const { return count_; }

private:
    std::vector<Eigen::MatrixXcd> sum_;
    std::vector<Eigen::MatrixXd> sum_sq_real_;
    std::vector<Eigen::MatrixXd> sum_sq_imag_;
    std::uint64_t count_{0};
};

// Reduce explicit per-trajectory state sequences (order: single -> vectors
// psi, two -> flattened Psi). All trajectories must share one grid.
EnsembleResult ensemble_reduce(std::span<const AmplitudeSeries> trajectories);

struct EnsembleOptions {
    std::uint64_t trajectories{1};
    std::uint64_t seed{0};
    NoiseMode mode{NoiseMode::piecewise_constant};
    double wiener_step{1e-3};  // cm; only for wiener mode
    unsigned threads{0};       // 0 = hardware concurrency; never affects values
    bool renormalize{false};
};

// <psi psi^dagger> ensembles from a fixed launch vector.
EnsembleResult run_single_ensemble(const NetworkSpec& spec, const Eigen::VectorXcd& psi0,
                                   std::span<const double> z_grid, const EnsembleOptions& opts);

// Two-particle <Psi Psi^dagger> ensembles over ordered pairs.
// The symmetrized Psi(0) is normalized to unit total probability; the
// applied scale factor is reported.
struct TwoParticleEnsembleResult {
    EnsembleResult reduced;           // dim N^2
    double input_scale{1.0};          // 1 / sqrt(symmetrized_norm2)
};
TwoParticleEnsembleResult run_two_ensemble(const NetworkSpec& spec, const Eigen::MatrixXcd& phi,
                                           PairStatistics statistics,
                                           std::span<const double> z_grid,
                                           const EnsembleOptions& opts);

}  // namespace dephnet
