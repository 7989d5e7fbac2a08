#include "dephnet/analysis.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dephnet {

// ---------------------------------------------------------------------------
// EvolutionRecord observables
// ---------------------------------------------------------------------------

Eigen::VectorXd EvolutionRecord::populations(std::size_t k) const {
    return rho.at(k).diagonal().real();
}

double EvolutionRecord::offdiagonal_norm(std::size_t k) const {
    const auto& m = rho.at(k);
    double s = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (i != j) s += std::norm(m(i, j));
        }
    }
    return std::sqrt(s);
}

double EvolutionRecord::max_offdiagonal(std::size_t k) const {
    const auto& m = rho.at(k);
    double best = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (i != j) best = std::max(best, std::abs(m(i, j)));
        }
    }
    return best;
}

double EvolutionRecord::max_exchange_coherence(std::size_t k) const {
    if (order != MatrixOrder::two) {
        throw std::logic_error("max_exchange_coherence: requires a two-particle record");
    }
    const auto& m = rho.at(k);
    double best = 0.0;
    for (int p = 0; p < num_sites; ++p) {
        for (int q = 0; q < num_sites; ++q) {
            if (p == q) continue;
            best = std::max(best, std::abs(m(pair_index(p, q, num_sites),
                                             pair_index(q, p, num_sites))));
        }
    }
    return best;
}

ConservationReport conservation_report(const EvolutionRecord& record) {
    ConservationReport rep;
    rep.min_eigenvalue = 1.0;
    for (const auto& m : record.rho) {
        rep.max_trace_drift = std::max(rep.max_trace_drift, std::abs(m.trace() - 1.0));
        rep.max_hermiticity_defect =
            std::max(rep.max_hermiticity_defect, (m - m.adjoint()).norm());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()));
        rep.min_eigenvalue = std::min(rep.min_eigenvalue, es.eigenvalues().minCoeff());
    }
    return rep;
}

// ---------------------------------------------------------------------------
// G2 and similarity
// ---------------------------------------------------------------------------

Eigen::MatrixXd g2_extract(const Eigen::MatrixXcd& rho2, double imag_tol) {
    const int n2 = static_cast<int>(rho2.rows());
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n2))));
    if (n * n != n2 || rho2.cols() != n2) {
        throw std::invalid_argument("g2_extract: not a pair-space matrix");
    }
    Eigen::MatrixXd g2(n, n);
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            const std::complex<double> d = rho2(pair_index(p, q, n), pair_index(p, q, n));
            if (std::abs(d.imag()) > imag_tol) {
                throw std::runtime_error("g2_extract: diagonal entry has imaginary part above tolerance");
            }
            g2(p, q) = d.real();
        }
    }
    return g2;
}

double similarity(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("similarity: shape mismatch");
    }
    double cross = 0.0;
    double sum_a = 0.0;
    double sum_b = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            // tolerate tiny negative round-off from reductions
            const double x = a(i, j);
            const double y = b(i, j);
            if (x < -1e-12 || y < -1e-12) {
                throw std::invalid_argument("similarity: inputs must be non-negative");
            }
            const double xc = std::max(x, 0.0);
            const double yc = std::max(y, 0.0);
            cross += std::sqrt(xc * yc);
            sum_a += xc;
            sum_b += yc;
        }
    }
    if (sum_a <= 0.0 || sum_b <= 0.0) {
        throw std::invalid_argument("similarity: all-zero input");
    }
    return cross * cross / (sum_a * sum_b);
}

// ---------------------------------------------------------------------------
// Decay fit
// ---------------------------------------------------------------------------

DecayFit coherence_decay_fit(const EvolutionRecord& record, int row, int col,
                             double magnitude_floor) {
    if (record.size() < 2) throw std::invalid_argument("coherence_decay_fit: need >= 2 points");
    std::vector<double> zs;
    std::vector<double> logmag;
    std::vector<double> phase;
    zs.reserve(record.size());
    double prev_arg = 0.0;
    double unwrap = 0.0;
    bool first = true;
    for (std::size_t k = 0; k < record.size(); ++k) {
        const std::complex<double> v = record.rho[k](row, col);
        const double mag = std::abs(v);
        if (mag <= magnitude_floor) continue;
        const double arg = std::arg(v);
        if (!first) {
            double d = arg - prev_arg;
            while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
            while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
            unwrap += d;
        }
        first = false;
        prev_arg = arg;
        zs.push_back(record.z[k]);
        logmag.push_back(std::log(mag));
        phase.push_back(unwrap);
    }
    if (zs.size() < 2) {
        throw std::invalid_argument("coherence_decay_fit: element is (numerically) zero over the window");
    }

    const auto fit_line = [&](const std::vector<double>& y) {
        const std::size_t m = zs.size();
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            sx += zs[i];
            sy += y[i];
            sxx += zs[i] * zs[i];
            sxy += zs[i] * y[i];
        }
        const double denom = m * sxx - sx * sx;
        const double slope = (m * sxy - sx * sy) / denom;
        const double intercept = (sy - slope * sx) / m;
        double rss = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double r = y[i] - (intercept + slope * zs[i]);
            rss += r * r;
        }
        return std::pair<double, double>(slope, std::sqrt(rss / m));
    };

    DecayFit fit;
    const auto [mag_slope, mag_rms] = fit_line(logmag);
    const auto [phase_slope, phase_rms] = fit_line(phase);
    fit.rate = -mag_slope;
    fit.frequency = phase_slope;
    fit.residual = mag_rms;
    fit.points_used = static_cast<int>(zs.size());
    (void)phase_rms;
    return fit;
}

// ---------------------------------------------------------------------------
// Steady-state decomposition
// ---------------------------------------------------------------------------

SteadyStateDecomposition decompose_steady_state(const Eigen::MatrixXcd& rho_ss) {
    const int n2 = static_cast<int>(rho_ss.rows());
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n2))));
    if (n * n != n2 || rho_ss.cols() != n2) {
        throw std::invalid_argument("decompose_steady_state: not a pair-space matrix");
    }

    SteadyStateDecomposition out;
    out.mix_part = Eigen::MatrixXcd::Zero(n2, n2);
    for (int m = 0; m < n; ++m) {
        const int mm = pair_index(m, m, n);
        out.mix_part(mm, mm) = rho_ss(mm, mm);
        out.mix_weight += rho_ss(mm, mm).real();
    }

    Eigen::MatrixXcd sep_sum = Eigen::MatrixXcd::Zero(n2, n2);
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            const int pq = pair_index(p, q, n);
            const int qp = pair_index(q, p, n);
            SepComponent comp;
            comp.site_p = p;
            comp.site_q = q;
            comp.coherence = rho_ss(pq, qp);
            comp.weight = 2.0 * std::abs(comp.coherence);
            comp.block_trace = rho_ss(pq, pq).real() + rho_ss(qp, qp).real();
            const double mag = std::abs(comp.coherence);
            sep_sum(pq, pq) += mag;
            sep_sum(qp, qp) += mag;
            sep_sum(pq, qp) += comp.coherence;
            sep_sum(qp, pq) += std::conj(comp.coherence);
            out.sep_parts.push_back(comp);
        }
    }

    out.residual_part = rho_ss - out.mix_part - sep_sum;
    out.residual_norm = out.residual_part.norm();
    return out;
}

// ---------------------------------------------------------------------------
// Product of singles
// ---------------------------------------------------------------------------

Eigen::MatrixXcd product_of_singles(const Eigen::MatrixXcd& rho_a, const Eigen::MatrixXcd& rho_b) {
    if (rho_a.rows() != rho_a.cols() || rho_b.rows() != rho_b.cols() ||
        rho_a.rows() != rho_b.rows()) {
        throw std::invalid_argument("product_of_singles: dimension mismatch");
    }
    const int n = static_cast<int>(rho_a.rows());
    Eigen::MatrixXcd out(n * n, n * n);
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            for (int pp = 0; pp < n; ++pp) {
                for (int qq = 0; qq < n; ++qq) {
                    out(pair_index(p, q, n), pair_index(pp, qq, n)) = rho_a(p, pp) * rho_b(q, qq);
                }
            }
        }
    }
    return out;
}

}  // namespace dephnet
