#include "dephnet/master.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace dephnet {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

}  // namespace

Eigen::VectorXcd vec(const Eigen::MatrixXcd& rho) {
    const int n = static_cast<int>(rho.rows());
    Eigen::VectorXcd v(n * rho.cols());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < rho.cols(); ++j) v[i * rho.cols() + j] = rho(i, j);
    }
    return v;
}

Eigen::MatrixXcd unvec(const Eigen::VectorXcd& v, int dim) {
    Eigen::MatrixXcd rho(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) rho(i, j) = v[i * dim + j];
    }
    return rho;
}

Liouvillian build_single_liouvillian(const NetworkSpec& spec) {
    validate_or_throw(spec);
    const int n = spec.num_sites;
    const auto& beta = spec.beta_mean;
    const auto& gamma = spec.gamma;
    const auto& kappa = spec.kappa;

    Liouvillian l;
    l.order = MatrixOrder::single;
    l.num_sites = n;
    l.matrix = Eigen::MatrixXcd::Zero(n * n, n * n);
    auto& m = l.matrix;

    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const int row = a * n + b;
            std::complex<double> diag =
                kI * (beta[a] - beta[b]) - 0.5 * (gamma[a] + gamma[b]);
            if (a == b) diag += std::sqrt(gamma[a] * gamma[b]);
            m(row, row) += diag;
            for (int r = 0; r < n; ++r) {
                m(row, r * n + b) += kI * kappa(a, r);
                m(row, a * n + r) -= kI * kappa(b, r);
            }
        }
    }
    return l;
}

Liouvillian build_two_liouvillian(const NetworkSpec& spec) {
    validate_or_throw(spec);
    const int n = spec.num_sites;
    const int n2 = n * n;
    const auto& beta = spec.beta_mean;
    const auto& g = spec.gamma;
    const auto& kappa = spec.kappa;

    Liouvillian l;
    l.order = MatrixOrder::two;
    l.num_sites = n;
    l.matrix = Eigen::MatrixXcd::Zero(n2 * n2, n2 * n2);
    auto& m = l.matrix;

    auto pair = [n](int p, int q) { return p * n + q; };

    for (int p = 0; p < n; ++p) {
     for (int q = 0; q < n; ++q) {
      for (int pp = 0; pp < n; ++pp) {
       for (int qq = 0; qq < n; ++qq) {
           const int row = pair(p, q) * n2 + pair(pp, qq);
           std::complex<double> diag =
               kI * (beta[p] + beta[q] - beta[pp] - beta[qq]) -
               0.5 * (g[p] + g[q] + g[pp] + g[qq]);
           if (p == pp) diag += std::sqrt(g[p] * g[pp]);
           if (p == qq) diag += std::sqrt(g[p] * g[qq]);
           if (q == pp) diag += std::sqrt(g[q] * g[pp]);
           if (q == qq) diag += std::sqrt(g[q] * g[qq]);
           if (p == q) diag -= std::sqrt(g[p] * g[q]);
           if (pp == qq) diag -= std::sqrt(g[pp] * g[qq]);
           m(row, row) += diag;
           for (int r = 0; r < n; ++r) {
               m(row, pair(r, q) * n2 + pair(pp, qq)) += kI * kappa(r, p);
               m(row, pair(p, r) * n2 + pair(pp, qq)) += kI * kappa(r, q);
               m(row, pair(p, q) * n2 + pair(r, qq)) -= kI * kappa(r, pp);
               m(row, pair(p, q) * n2 + pair(pp, r)) -= kI * kappa(r, qq);
           }
       }
      }
     }
    }
    return l;
}

Eigen::MatrixXcd single_rhs(const NetworkSpec& spec, const Eigen::MatrixXcd& rho) {
    const int n = spec.num_sites;
    const auto& beta = spec.beta_mean;
    const auto& gamma = spec.gamma;
    const auto& kappa = spec.kappa;
    Eigen::MatrixXcd out(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            std::complex<double> v =
                (kI * (beta[a] - beta[b]) - 0.5 * (gamma[a] + gamma[b])) * rho(a, b);
            if (a == b) v += std::sqrt(gamma[a] * gamma[b]) * rho(a, b);
            for (int r = 0; r < n; ++r) {
                v += kI * kappa(a, r) * rho(r, b);
                v -= kI * kappa(b, r) * rho(a, r);
            }
            out(a, b) = v;
        }
    }
    return out;
}

Eigen::MatrixXcd two_rhs(const NetworkSpec& spec, const Eigen::MatrixXcd& rho2) {
    const int n = spec.num_sites;
    const auto& beta = spec.beta_mean;
    const auto& g = spec.gamma;
    const auto& kappa = spec.kappa;
    auto pair = [n](int p, int q) { return p * n + q; };
    Eigen::MatrixXcd out(n * n, n * n);
    for (int p = 0; p < n; ++p) {
     for (int q = 0; q < n; ++q) {
      for (int pp = 0; pp < n; ++pp) {
       for (int qq = 0; qq < n; ++qq) {
           const int r0 = pair(p, q);
           const int c0 = pair(pp, qq);
           std::complex<double> coef =
               kI * (beta[p] + beta[q] - beta[pp] - beta[qq]) -
               0.5 * (g[p] + g[q] + g[pp] + g[qq]);
           if (p == pp) coef += std::sqrt(g[p] * g[pp]);
           if (p == qq) coef += std::sqrt(g[p] * g[qq]);
           if (q == pp) coef += std::sqrt(g[q] * g[pp]);
           if (q == qq) coef += std::sqrt(g[q] * g[qq]);
           if (p == q) coef -= std::sqrt(g[p] * g[q]);
           if (pp == qq) coef -= std::sqrt(g[pp] * g[qq]);
           std::complex<double> v = coef * rho2(r0, c0);
           for (int r = 0; r < n; ++r) {
               v += kI * kappa(r, p) * rho2(pair(r, q), c0);
               v += kI * kappa(r, q) * rho2(pair(p, r), c0);
               v -= kI * kappa(r, pp) * rho2(r0, pair(r, qq));
               v -= kI * kappa(r, qq) * rho2(r0, pair(pp, r));
           }
           out(r0, c0) = v;
       }
      }
     }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

namespace {

// Scaling-and-squaring matrix exponential with a fixed-order Taylor core;
// adequate fallback for the small dense generators handled here.
Eigen::MatrixXcd expm_dense(const Eigen::MatrixXcd& a) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }
    const Eigen::MatrixXcd as = a * scale;
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
    Eigen::MatrixXcd sum = term;
    for (int k = 1; k <= 18; ++k) {
        term = (term * as) / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

void check_rho_dim(const Liouvillian& l, const Eigen::MatrixXcd& rho) {
    if (rho.rows() != l.state_dim() || rho.cols() != l.state_dim()) {
        throw std::invalid_argument("integrate: rho dimension does not match Liouvillian");
    }
}

void check_grid_ascending(std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("integrate: empty z_grid");
    double prev = -1.0;
    for (double z : grid) {
        if (!(z >= 0.0) || !std::isfinite(z)) {
            throw std::invalid_argument("integrate: z_grid entries must be finite, >= 0");
        }
        if (z <= prev) throw std::invalid_argument("integrate: non-ascending grid");
        prev = z;
    }
}

}  // namespace

MasterIntegrator::MasterIntegrator(const Liouvillian& liouvillian) : liouvillian_(liouvillian) {
    const auto& m = liouvillian_.matrix;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() == Eigen::Success) {
        v_ = solver.eigenvectors();
        eigenvalues_ = solver.eigenvalues();
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(v_);
        if (lu.isInvertible()) {
            v_inv_ = lu.inverse();
            const double residual = (v_ * eigenvalues_.asDiagonal() * v_inv_ - m).norm();
            eigen_ok_ = residual <= 1e-10 * std::max(1.0, m.norm());
        }
    }
}

Eigen::MatrixXcd MasterIntegrator::propagate(const Eigen::MatrixXcd& rho, double dz) const {
    check_rho_dim(liouvillian_, rho);
    const int dim = liouvillian_.state_dim();
    if (dz == 0.0) return rho;
    if (eigen_ok_) {
        Eigen::VectorXcd w = v_inv_ * vec(rho);
        for (Eigen::Index i = 0; i < w.size(); ++i) w[i] *= std::exp(eigenvalues_[i] * dz);
        return unvec(v_ * w, dim);
    }
    return unvec(expm_dense(liouvillian_.matrix * dz) * vec(rho), dim);
}

EvolutionRecord MasterIntegrator::integrate(const Eigen::MatrixXcd& rho0,
                                            std::span<const double> z_grid) const {
    check_rho_dim(liouvillian_, rho0);
    check_grid_ascending(z_grid);
    EvolutionRecord record;
    record.order = liouvillian_.order;
    record.num_sites = liouvillian_.num_sites;
    record.z.assign(z_grid.begin(), z_grid.end());
    record.rho.reserve(z_grid.size());

    Eigen::MatrixXcd current = rho0;
    double z_prev = 0.0;
    for (double z : z_grid) {
        current = propagate(current, z - z_prev);
        z_prev = z;
        record.rho.push_back(current);
    }
    return record;
}

EvolutionRecord integrate(const Liouvillian& liouvillian, const Eigen::MatrixXcd& rho0,
                          std::span<const double> z_grid) {
    return MasterIntegrator(liouvillian).integrate(rho0, z_grid);
}

EvolutionRecord integrate_rk4(const Liouvillian& liouvillian, const Eigen::MatrixXcd& rho0,
                              std::span<const double> z_grid, double step) {
    check_rho_dim(liouvillian, rho0);
    check_grid_ascending(z_grid);
    if (!(step > 0.0)) throw std::invalid_argument("integrate_rk4: step must be positive");
    const int dim = liouvillian.state_dim();
    const auto& m = liouvillian.matrix;

    EvolutionRecord record;
    record.order = liouvillian.order;
    record.num_sites = liouvillian.num_sites;
    record.z.assign(z_grid.begin(), z_grid.end());
    record.rho.reserve(z_grid.size());

    Eigen::VectorXcd v = vec(rho0);
    Eigen::VectorXcd k1(v.size()), k2(v.size()), k3(v.size()), k4(v.size());
    double cur = 0.0;
    for (double target : z_grid) {
        while (cur < target - 1e-12) {
            const double h = std::min(step, target - cur);
            k1.noalias() = m * v;
            k2.noalias() = m * (v + 0.5 * h * k1);
            k3.noalias() = m * (v + 0.5 * h * k2);
            k4.noalias() = m * (v + h * k3);
            v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            cur += h;
        }
        cur = target;
        record.rho.push_back(unvec(v, dim));
    }
    return record;
}

// ---------------------------------------------------------------------------
// Steady states
// ---------------------------------------------------------------------------

Eigen::MatrixXd exchange_operator(int num_sites) {
    const int n2 = num_sites * num_sites;
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n2, n2);
    for (int p = 0; p < num_sites; ++p) {
        for (int q = 0; q < num_sites; ++q) {
            e(pair_index(q, p, num_sites), pair_index(p, q, num_sites)) = 1.0;
        }
    }
    return e;
}

Eigen::MatrixXcd project_exchange_sector(const Eigen::MatrixXcd& rho, SectorFilter sector) {
    if (sector == SectorFilter::none) return rho;
    const int n2 = static_cast<int>(rho.rows());
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n2))));
    if (n * n != n2) {
        throw std::invalid_argument("project_exchange_sector: not a pair-space matrix");
    }
    const Eigen::MatrixXd e = exchange_operator(n);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n2, n2);
    const Eigen::MatrixXd proj =
        0.5 * (sector == SectorFilter::boson ? (id + e).eval() : (id - e).eval());
    return proj * rho * proj;
}

SteadyStateResult steady_state(const Liouvillian& liouvillian, SectorFilter sector) {
    const int dim = liouvillian.state_dim();
    const auto& m = liouvillian.matrix;
    if (sector != SectorFilter::none && liouvillian.order != MatrixOrder::two) {
        throw std::invalid_argument("steady_state: exchange sectors apply to two-particle Liouvillians");
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = 1e-10 * sv[0];
    int null_dim = 0;
    for (Eigen::Index i = sv.size() - 1; i >= 0 && sv[i] <= cutoff; --i) ++null_dim;
    if (null_dim == 0) {
        throw std::runtime_error("steady_state: Liouvillian has no null space at tolerance");
    }

    // Null-space basis as matrices, sector-projected.
    std::vector<Eigen::MatrixXcd> basis;
    basis.reserve(null_dim);
    for (int i = 0; i < null_dim; ++i) {
        Eigen::MatrixXcd x = unvec(svd.matrixV().col(svd.matrixV().cols() - 1 - i), dim);
        x = project_exchange_sector(x, sector);
        basis.push_back(x);
    }

    // Sector dimension: rank of the projected stack.
    Eigen::MatrixXcd stack(dim * dim, null_dim);
    for (int i = 0; i < null_dim; ++i) stack.col(i) = vec(basis[i]);
    Eigen::JacobiSVD<Eigen::MatrixXcd> stack_svd(stack, Eigen::ComputeThinU | Eigen::ComputeThinV);
    int sector_dim = 0;
    if (stack_svd.singularValues().size() > 0) {
        const double sc = 1e-10 * std::max(stack_svd.singularValues()[0], 1e-300);
        for (Eigen::Index i = 0; i < stack_svd.singularValues().size(); ++i) {
            if (stack_svd.singularValues()[i] > sc) ++sector_dim;
        }
    }
    if (sector_dim == 0) {
        throw std::runtime_error("steady_state: no element in the requested exchange sector");
    }

    // Orthonormal sector basis; Hermitize (closed under dagger since the
    // semigroup preserves Hermiticity).
    std::vector<Eigen::MatrixXcd> herm;
    for (int i = 0; i < sector_dim; ++i) {
        Eigen::MatrixXcd y = unvec(stack_svd.matrixU().col(i), dim);
        herm.push_back(0.5 * (y + y.adjoint()).eval());
        herm.push_back((0.5 * kI * (y - y.adjoint())).eval());
    }

    // Minimum-Frobenius-norm trace-one combination: minimize ||sum c_i H_i||
    // s.t. sum c_i tr(H_i) = 1, with real coefficients. The solution is
    // proportional to sum_i tr(H_i) H_i after orthonormalizing the H_i.
    // Orthonormalize the Hermitian set first (real Gram-Schmidt under the
    // Frobenius inner product).
    std::vector<Eigen::MatrixXcd> ortho;
    for (const auto& h : herm) {
        Eigen::MatrixXcd v = h;
        for (const auto& o : ortho) {
            const double c = (o.adjoint() * v).trace().real();
            v -= c * o;
        }
        const double nrm = v.norm();
        if (nrm > 1e-12) ortho.push_back(v / nrm);
    }
    Eigen::MatrixXcd candidate = Eigen::MatrixXcd::Zero(dim, dim);
    double weight = 0.0;
    for (const auto& o : ortho) {
        const double tr = o.trace().real();
        candidate += tr * o;
        weight += tr * tr;
    }
    if (weight < 1e-24) {
        throw std::runtime_error("steady_state: no trace-carrying element in sector (unphysical)");
    }
    candidate /= weight;  // now tr(candidate) = 1, minimum norm

    // Physical projection: clip tiny negative eigenvalues, renormalize.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(candidate);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -1e-6) {
        throw std::runtime_error("steady_state: sector representative is not positive semidefinite");
    }
    Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
    for (Eigen::Index i = 0; i < clipped.size(); ++i) {
        if (es.eigenvalues()[i] < 0.0 && es.eigenvalues()[i] > -1e-12) clipped[i] = 0.0;
    }
    Eigen::MatrixXcd rho =
        es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
    rho /= rho.trace().real();

    SteadyStateResult result;
    result.rho = rho;
    result.null_space_dimension = null_dim;
    result.sector_dimension = sector_dim;
    result.residual = (m * vec(rho)).norm();
    return result;
}

}  // namespace dephnet
