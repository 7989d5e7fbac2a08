// record.hpp — Time-stamped density-matrix evolutions and their observables

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <vector>

namespace dephnet {

enum class MatrixOrder { single, two };
enum class ExchangeStatistics { boson, fermion, distinguishable };

// Ordered-pair flattening used everywhere for two-particle objects:
// (p, q) -> p * N + q with 0-based p, q.
inline int pair_index(int p, int q, int num_sites) { return p * num_sites + q; }

struct EvolutionRecord {
    MatrixOrder order{MatrixOrder::single};
    std::optional<ExchangeStatistics> statistics;
    int num_sites{0};
    std::vector<double> z;                 // cm, ascending
    std::vector<Eigen::MatrixXcd> rho;     // N x N or N^2 x N^2, one per z

    std::size_t size() const { return z.size(); }

    // Diagonal of rho at step k (real parts; populations or G2 flattened).
    Eigen::VectorXd populations(std::size_t k) const;
    // sqrt(sum of squared magnitudes of the off-diagonal entries) at step k.
    double offdiagonal_norm(std::size_t k) const;
    // Largest off-diagonal magnitude at step k.
    double max_offdiagonal(std::size_t k) const;
    // Largest |rho_{(p,q),(q,p)}|, p != q, at step k (two-particle only).
    double max_exchange_coherence(std::size_t k) const;
};

// Conservation diagnostics over a record (used by tests and the verifier).
struct ConservationReport {
    double max_trace_drift{0.0};       // max |tr rho - 1|
    double max_hermiticity_defect{0.0};// max ||rho - rho^dagger||_F
    double min_eigenvalue{0.0};        // most negative eigenvalue seen
};

ConservationReport conservation_report(const EvolutionRecord& record);

}  // namespace dephnet
