#include "dephnet/states.hpp"

#include <cmath>
#include <stdexcept>

namespace dephnet {

namespace {

void check_sites(InitialStateKind kind, int num_sites, int a, int b) {
    if (a < 0 || a >= num_sites || b < 0 || b >= num_sites) {
        throw std::invalid_argument("make_initial: site index out of range");
    }
    const bool needs_distinct = kind != InitialStateKind::classically_correlated;
    if (needs_distinct && a == b) {
        throw std::invalid_argument("make_initial: this state kind requires distinct sites");
    }
}

Eigen::MatrixXcd projector(const Eigen::VectorXcd& psi) {
    return psi * psi.adjoint();
}

}  // namespace

Eigen::MatrixXcd make_initial(InitialStateKind kind, int num_sites, int a, int b) {
    check_sites(kind, num_sites, a, b);
    const int n2 = num_sites * num_sites;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n2);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n2, n2);

    const int ab = pair_index(a, b, num_sites);
    const int ba = pair_index(b, a, num_sites);
    const int aa = pair_index(a, a, num_sites);
    const int bb = pair_index(b, b, num_sites);

    switch (kind) {
        case InitialStateKind::separable_boson:
            psi[ab] = inv_sqrt2;
            psi[ba] = inv_sqrt2;
            return projector(psi);
        case InitialStateKind::separable_fermion:
            psi[ab] = inv_sqrt2;
            psi[ba] = -inv_sqrt2;
            return projector(psi);
        case InitialStateKind::path_entangled_boson:
            psi[aa] = inv_sqrt2;
            psi[bb] = inv_sqrt2;
            return projector(psi);
        case InitialStateKind::classically_correlated:
            rho(aa, aa) = 0.5;
            rho(bb, bb) = 0.5;
            return rho;
        case InitialStateKind::incoherent_distinguishable:
            rho(ab, ab) = 0.5;
            rho(ba, ba) = 0.5;
            return rho;
    }
    throw std::invalid_argument("make_initial: unknown state kind");
}

Eigen::MatrixXcd pure_input_profile(InitialStateKind kind, int num_sites, int a, int b) {
    check_sites(kind, num_sites, a, b);
    Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(num_sites, num_sites);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (kind) {
        case InitialStateKind::separable_boson:
            // phi_ab = 1/sqrt(2): symmetrization already lands at unit norm.
            phi(a, b) = inv_sqrt2;
            return phi;
        case InitialStateKind::separable_fermion:
            // sign convention: antisymmetrized profile gives
            // Psi_ab = -1/sqrt(2), Psi_ba = +1/sqrt(2); the projector matches
            // (|ab> - |ba>)/sqrt(2) up to global phase.
            phi(a, b) = inv_sqrt2;
            return phi;
        case InitialStateKind::path_entangled_boson:
            // Bunched support double-counts under symmetrization; the
            // ensemble pipeline renormalizes Psi(0) to unit probability.
            phi(a, a) = inv_sqrt2;
            phi(b, b) = inv_sqrt2;
            return phi;
        case InitialStateKind::classically_correlated:
        case InitialStateKind::incoherent_distinguishable:
            break;
    }
    throw std::invalid_argument("pure_input_profile: mixed state kinds have no pure profile");
}

ExchangeStatistics kind_statistics(InitialStateKind kind) {
    switch (kind) {
        case InitialStateKind::separable_fermion:
            return ExchangeStatistics::fermion;
        case InitialStateKind::incoherent_distinguishable:
            return ExchangeStatistics::distinguishable;
        default:
            return ExchangeStatistics::boson;
    }
}

}  // namespace dephnet
