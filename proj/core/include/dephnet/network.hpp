// network.hpp — Site network definition, validation, and noise calibration

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace dephnet {

// Segmented-disorder calibration: per-site standard deviation of the
// site-energy draws and the segment (correlation) length, both in the
// cm / cm^-1 unit system used throughout.
struct NoiseCalibration {
    Eigen::VectorXd sigma;           // cm^-1, one entry per site, >= 0
    double correlation_length{1.0};  // cm, > 0
};

// Static description of a coupled-site network with white-noise dephasing.
// kappa must be symmetric with zero diagonal; gamma entries non-negative.
// Immutable after construction by convention: safe to share across workers.
struct NetworkSpec {
    int num_sites{0};
    Eigen::VectorXd beta_mean;  // cm^-1, mean propagation constants
    Eigen::MatrixXd kappa;      // cm^-1, hopping rates
    Eigen::VectorXd gamma;      // cm^-1, dephasing rates
    std::optional<NoiseCalibration> calibration;

    // diag(beta_mean) + kappa, the noise-free generator
    Eigen::MatrixXd mean_hamiltonian() const;
};

// gamma[m] = sigma[m]^2 * correlation_length. Throws std::invalid_argument
// on negative sigma or non-positive correlation length.
Eigen::VectorXd calibrate_dephasing(const NoiseCalibration& calib);

enum class TrimerProfile { classical, quantum };

// The three-site benchmark network: beta = (1, 1, -1) cm^-1,
// kappa_12 = 2 cm^-1, kappa_13 = kappa_23 = 0.6 cm^-1, and per-profile
// sigma vectors with a 1 cm correlation length (gamma derived by
// calibrate_dephasing).
NetworkSpec paper_trimer(TrimerProfile profile);

// Returns every violated invariant with offending indices (1-based sites in
// the message text). Empty result means the spec is valid. If both gamma and
// a calibration are present they must agree to 1e-12 relative.
std::vector<std::string> validate(const NetworkSpec& spec);

// validate() + throw std::invalid_argument listing all violations.
void validate_or_throw(const NetworkSpec& spec);

// Copy with gamma scaled by `factor` (calibration sigma rescaled to match).
NetworkSpec scale_dephasing(const NetworkSpec& spec, double factor);

}  // namespace dephnet
