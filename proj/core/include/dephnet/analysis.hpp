// analysis.hpp — Correlations, similarity, decay fits, steady-state decomposition

#pragma once

#include "dephnet/record.hpp"

#include <Eigen/Dense>

#include <complex>
#include <utility>
#include <vector>

namespace dephnet {

// ---------------------------------------------------------------------------
// G2 correlations
// ---------------------------------------------------------------------------

// G2_{p,q} = rho2_{(p,q),(p,q)}: the joint detection (coincidence) matrix.
// Asserts diagonal imaginary parts below `imag_tol` and discards them.
Eigen::MatrixXd g2_extract(const Eigen::MatrixXcd& rho2, double imag_tol = 1e-10);

// Bhattacharyya-type overlap S = (sum sqrt(a b))^2 / (sum a * sum b),
// elementwise over non-negative matrices. 1 for proportional inputs, 0 for
// disjoint supports. Throws on an all-zero or negative input.
double similarity(const Eigen::MatrixXd& g2_a, const Eigen::MatrixXd& g2_b);

// ---------------------------------------------------------------------------
// Coherence decay fits
// ---------------------------------------------------------------------------

struct DecayFit {
    double rate{0.0};        // cm^-1; positive = decaying magnitude
    double frequency{0.0};   // cm^-1; d(arg rho)/dz from unwrapped phase
    double residual{0.0};    // RMS residual of the log-magnitude line fit
    int points_used{0};
};

// Least-squares line fit of log|rho_elem(z)| (and unwrapped phase) over the
// window where |rho_elem| > magnitude_floor. Throws if the element is
// (numerically) identically zero or fewer than two window points remain.
DecayFit coherence_decay_fit(const EvolutionRecord& record, int row, int col,
                             double magnitude_floor = 1e-6);

// ---------------------------------------------------------------------------
// Steady-state decomposition
// ---------------------------------------------------------------------------

// rho_ss = mix(bunched diagonal) + sum over pairs of exchange-coherent
// blocks + residual. The (p,q) component is the coherent excess
// [[|c|, c], [conj(c), |c|]] on the {(p,q),(q,p)} block with
// c = rho_{(p,q),(q,p)}; weight = 2|c| (the trace the coherent part carries),
// signed by the real part: +boson-like, -fermion-like.
struct SepComponent {
    int site_p{0};
    int site_q{0};
    std::complex<double> coherence;  // rho_{(p,q),(q,p)}
    double weight{0.0};              // 2 |coherence|
    double block_trace{0.0};         // rho_{(p,q),(p,q)} + rho_{(q,p),(q,p)}
};

struct SteadyStateDecomposition {
    Eigen::MatrixXcd mix_part;       // bunched diagonal component
    double mix_weight{0.0};
    std::vector<SepComponent> sep_parts;   // one per unordered pair p < q
    Eigen::MatrixXcd residual_part;  // rho - mix - sum sep (exact identity)
    double residual_norm{0.0};       // Frobenius
};

SteadyStateDecomposition decompose_steady_state(const Eigen::MatrixXcd& rho_ss);

// ---------------------------------------------------------------------------
// Distinguishable-particle comparison utility
// ---------------------------------------------------------------------------

// Tensor product of two single-particle matrices in ordered-pair indexing:
// out_{(p,q),(p',q')} = a_{p,p'} b_{q,q'}.
Eigen::MatrixXcd product_of_singles(const Eigen::MatrixXcd& rho_a, const Eigen::MatrixXcd& rho_b);

}  // namespace dephnet
