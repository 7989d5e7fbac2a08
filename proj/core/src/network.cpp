#include "dephnet/network.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dephnet {

Eigen::MatrixXd NetworkSpec::mean_hamiltonian() const {
    Eigen::MatrixXd h = kappa;
    h.diagonal() += beta_mean;
    return h;
}

Eigen::VectorXd calibrate_dephasing(const NoiseCalibration& calib) {
    if (!(calib.correlation_length > 0.0) || !std::isfinite(calib.correlation_length)) {
        throw std::invalid_argument("calibrate_dephasing: correlation_length must be positive");
    }
    for (Eigen::Index m = 0; m < calib.sigma.size(); ++m) {
        if (!(calib.sigma[m] >= 0.0) || !std::isfinite(calib.sigma[m])) {
            throw std::invalid_argument("calibrate_dephasing: sigma must be finite and non-negative");
        }
    }
    return calib.sigma.array().square() * calib.correlation_length;
}

NetworkSpec paper_trimer(TrimerProfile profile) {
    NetworkSpec spec;
    spec.num_sites = 3;
    spec.beta_mean = Eigen::Vector3d(1.0, 1.0, -1.0);
    spec.kappa = Eigen::Matrix3d::Zero();
    spec.kappa(0, 1) = spec.kappa(1, 0) = 2.0;
    spec.kappa(0, 2) = spec.kappa(2, 0) = 0.6;
    spec.kappa(1, 2) = spec.kappa(2, 1) = 0.6;

    NoiseCalibration calib;
    calib.correlation_length = 1.0;
    // Appendix per-site inscription deviations; these reproduce the quoted
    // gamma values via gamma = sigma^2 * dz (the main-text sigma = 3 / 2
    // figures do not).
    if (profile == TrimerProfile::classical) {
        calib.sigma = Eigen::Vector3d(1.3143, 1.3204, 1.3283);
    } else {
        calib.sigma = Eigen::Vector3d(1.1407, 1.1120, 1.1371);
    }
    spec.calibration = calib;
    spec.gamma = calibrate_dephasing(calib);
    return spec;
}

namespace {

bool finite(const Eigen::MatrixXd& m) {
    return m.allFinite();
}

}  // namespace

std::vector<std::string> validate(const NetworkSpec& spec) {
    std::vector<std::string> violations;
    const int n = spec.num_sites;
    if (n <= 0) {
        violations.push_back("num_sites must be positive");
        return violations;
    }
    if (spec.beta_mean.size() != n) {
        violations.push_back("beta_mean length != num_sites");
    } else if (!finite(spec.beta_mean)) {
        violations.push_back("beta_mean has non-finite entries");
    }
    if (spec.kappa.rows() != n || spec.kappa.cols() != n) {
        violations.push_back("kappa is not num_sites x num_sites");
    } else {
        if (!finite(spec.kappa)) violations.push_back("kappa has non-finite entries");
        for (int i = 0; i < n; ++i) {
            if (spec.kappa(i, i) != 0.0) {
                std::ostringstream os;
                os << "nonzero coupling diagonal at site " << (i + 1);
                violations.push_back(os.str());
            }
            for (int j = i + 1; j < n; ++j) {
                if (spec.kappa(i, j) != spec.kappa(j, i)) {
                    std::ostringstream os;
                    os << "asymmetric coupling (" << (i + 1) << "," << (j + 1) << ")";
                    violations.push_back(os.str());
                }
            }
        }
    }
    if (spec.gamma.size() != n) {
        violations.push_back("gamma length != num_sites");
    } else {
        for (int i = 0; i < n; ++i) {
            if (!(spec.gamma[i] >= 0.0) || !std::isfinite(spec.gamma[i])) {
                std::ostringstream os;
                os << "negative dephasing rate at site " << (i + 1);
                violations.push_back(os.str());
            }
        }
    }
    if (spec.calibration) {
        const auto& c = *spec.calibration;
        if (c.sigma.size() != n) {
            violations.push_back("calibration sigma length != num_sites");
        } else if (!(c.correlation_length > 0.0)) {
            violations.push_back("calibration correlation_length must be positive");
        } else if (spec.gamma.size() == n) {
            // Both supply routes present: they must agree.
            for (int i = 0; i < n; ++i) {
                const double derived = c.sigma[i] * c.sigma[i] * c.correlation_length;
                const double scale = std::max(std::abs(derived), std::abs(spec.gamma[i]));
                if (std::abs(derived - spec.gamma[i]) > 1e-12 * std::max(scale, 1.0)) {
                    std::ostringstream os;
                    os << "gamma/calibration mismatch at site " << (i + 1) << " (gamma="
                       << spec.gamma[i] << ", sigma^2*dz=" << derived << ")";
                    violations.push_back(os.str());
                }
            }
        }
    }
    return violations;
}

void validate_or_throw(const NetworkSpec& spec) {
    auto violations = validate(spec);
    if (violations.empty()) return;
    std::ostringstream os;
    os << "invalid network:";
    for (const auto& v : violations) os << " [" << v << "]";
    throw std::invalid_argument(os.str());
}

NetworkSpec scale_dephasing(const NetworkSpec& spec, double factor) {
    if (!(factor >= 0.0) || !std::isfinite(factor)) {
        throw std::invalid_argument("scale_dephasing: factor must be finite and non-negative");
    }
    NetworkSpec out = spec;
    out.gamma = spec.gamma * factor;
    if (out.calibration) {
        out.calibration->sigma = spec.calibration->sigma * std::sqrt(factor);
    }
    return out;
}

}  // namespace dephnet
