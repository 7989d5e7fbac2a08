// states.hpp — Two-particle initial density matrices on the ordered-pair basis

#pragma once

#include "dephnet/record.hpp"

#include <Eigen/Dense>

namespace dephnet {

enum class InitialStateKind {
    separable_boson,          // (|1_a,1_b> + |1_b,1_a>)/sqrt(2), a != b
    separable_fermion,        // (|1_a,1_b> - |1_b,1_a>)/sqrt(2), a != b
    path_entangled_boson,     // (|1_a,1_a> + |1_b,1_b>)/sqrt(2), a != b
    classically_correlated,   // (|1_a,1_a><...| + |1_b,1_b><...|)/2
    incoherent_distinguishable,  // (|1_a,1_b><...| + |1_b,1_a><...|)/2
};

// N^2 x N^2 density matrix for the requested kind with 0-based injection
// sites (a, b). Throws std::invalid_argument for out-of-range sites or a == b
// where the kind requires distinct sites.
Eigen::MatrixXcd make_initial(InitialStateKind kind, int num_sites, int site_a, int site_b);

// The amplitude-profile phi feeding Eq.-style trajectory pipelines for pure
// kinds: phi with sum |phi|^2 = 1 whose symmetrization (after unit
// normalization) reproduces make_initial. Throws for the mixed kinds
// (classically_correlated, incoherent_distinguishable have no single pure
// profile).
Eigen::MatrixXcd pure_input_profile(InitialStateKind kind, int num_sites, int site_a, int site_b);

// Statistics sector the kind belongs to (distinguishable for the incoherent
// mixture, boson for the symmetric kinds).
ExchangeStatistics kind_statistics(InitialStateKind kind);

}  // namespace dephnet
