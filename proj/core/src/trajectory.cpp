#include "dephnet/trajectory.hpp"

#include "ensemble_detail.hpp"
#include "trajectory_detail.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace dephnet {

namespace {

using detail::walk_segments;

struct MaterializedPhiRows {
    const Eigen::MatrixXd& detunings;
    std::vector<double> row;

    explicit MaterializedPhiRows(const NoiseRealization& noise)
        : detunings(noise.detunings), row(noise.num_sites()) {}

    const double* operator()(int seg) {
        if (seg >= detunings.rows()) {
            throw std::invalid_argument("noise realization shorter than requested z");
        }
        for (int site = 0; site < static_cast<int>(row.size()); ++site) {
            row[site] = detunings(seg, site);
        }
        return row.data();
    }
};

void check_network(const NetworkSpec& spec) {
    validate_or_throw(spec);
}

}  // namespace

PropagatorSeries evolve_propagator(const NetworkSpec& spec, const NoiseRealization& noise,
                                   std::span<const double> z_grid,
                                   const IntegrationOptions& opts) {
    check_network(spec);
    PropagatorSeries series;
    series.z.assign(z_grid.begin(), z_grid.end());
    series.U.resize(z_grid.size());
    MaterializedPhiRows rows(noise);
    if (noise.mode == NoiseMode::piecewise_constant) {
        detail::PiecewiseMatrixKernel kernel(spec);
        kernel.out = &series.U;
        walk_segments(noise.segment_length, noise.total_length, rows, z_grid, kernel);
    } else {
        detail::WienerDrift drift(spec);
        detail::walk_wiener_matrix(drift, opts.renormalize, noise.segment_length,
                                   noise.total_length, rows, z_grid, series.U);
    }
    return series;
}

AmplitudeSeries evolve_amplitude(const NetworkSpec& spec, const NoiseRealization& noise,
                                 const Eigen::VectorXcd& psi0, std::span<const double> z_grid,
                                 const IntegrationOptions& opts) {
    check_network(spec);
    if (psi0.size() != spec.num_sites) {
        throw std::invalid_argument("evolve_amplitude: psi0 dimension mismatch");
    }
    if (std::abs(psi0.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("evolve_amplitude: psi0 must be normalized");
    }
    AmplitudeSeries series;
    series.z.assign(z_grid.begin(), z_grid.end());
    series.psi.resize(z_grid.size());
    MaterializedPhiRows rows(noise);
    if (noise.mode == NoiseMode::piecewise_constant) {
        detail::PiecewiseVectorKernel kernel(spec, psi0);
        kernel.out = &series.psi;
        walk_segments(noise.segment_length, noise.total_length, rows, z_grid, kernel);
    } else {
        detail::WienerDrift drift(spec);
        detail::walk_wiener_vector(drift, psi0, opts.renormalize, noise.segment_length,
                                   noise.total_length, rows, z_grid, series.psi);
    }
    return series;
}

// ---------------------------------------------------------------------------
// Multi-particle amplitudes
// ---------------------------------------------------------------------------

namespace {

Eigen::MatrixXcd symmetrized_profile(const Eigen::MatrixXcd& phi, PairStatistics statistics) {
    if (phi.rows() != phi.cols()) {
        throw std::invalid_argument("two_particle_amplitude: phi must be square");
    }
    if (statistics == PairStatistics::boson) return phi.transpose() + phi;
    return phi.transpose() - phi;
}

}  // namespace

double symmetrized_norm2(const Eigen::MatrixXcd& phi, PairStatistics statistics) {
    return symmetrized_profile(phi, statistics).squaredNorm();
}

Eigen::MatrixXcd two_particle_amplitude(const Eigen::MatrixXcd& U, const Eigen::MatrixXcd& phi,
                                        PairStatistics statistics) {
    if (U.rows() != U.cols() || U.rows() != phi.rows()) {
        throw std::invalid_argument("two_particle_amplitude: dimension mismatch");
    }
    const Eigen::MatrixXcd a = symmetrized_profile(phi, statistics);
    if (a.squaredNorm() < 1e-24) {
        throw std::invalid_argument(
            "two_particle_amplitude: degenerate input (symmetrized profile vanishes)");
    }
    return U * a * U.transpose();
}

Eigen::VectorXcd n_particle_amplitude(const Eigen::MatrixXcd& U, const Eigen::VectorXcd& phi,
                                      int num_particles) {
    const int n = static_cast<int>(U.rows());
    if (U.rows() != U.cols()) throw std::invalid_argument("n_particle_amplitude: U must be square");
    if (num_particles < 1 || num_particles > 4) {
        throw std::invalid_argument("n_particle_amplitude: unsupported particle count (k must be 1..4)");
    }
    const int k = num_particles;
    std::int64_t dim = 1;
    for (int i = 0; i < k; ++i) dim *= n;
    if (phi.size() != dim) {
        throw std::invalid_argument("n_particle_amplitude: phi size must be num_sites^k");
    }

    std::array<int, 4> perm{};
    std::array<int, 4> out_idx{};
    std::array<int, 4> in_idx{};
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);

    for (std::int64_t out = 0; out < dim; ++out) {
        std::int64_t rem = out;
        for (int i = k - 1; i >= 0; --i) {
            out_idx[i] = static_cast<int>(rem % n);
            rem /= n;
        }
        std::complex<double> acc = 0.0;
        for (std::int64_t in = 0; in < dim; ++in) {
            const std::complex<double> w = phi[in];
            if (w == 0.0) continue;
            std::int64_t r = in;
            for (int i = k - 1; i >= 0; --i) {
                in_idx[i] = static_cast<int>(r % n);
                r /= n;
            }
            for (int i = 0; i < k; ++i) perm[i] = i;
            std::complex<double> sum = 0.0;
            do {
                std::complex<double> prod = 1.0;
                for (int i = 0; i < k; ++i) {
                    prod *= U(out_idx[perm[i]], in_idx[i]);
                }
                sum += prod;
            } while (std::next_permutation(perm.begin(), perm.begin() + k));
            acc += w * sum;
        }
        psi[out] = acc;
    }
    return psi;
}

// ---------------------------------------------------------------------------
// Ensemble reduction
// ---------------------------------------------------------------------------

OuterProductAccumulator::OuterProductAccumulator(int dim, std::size_t grid_points)
    : sum_(grid_points, Eigen::MatrixXcd::Zero(dim, dim)),
      sum_sq_real_(grid_points, Eigen::MatrixXd::Zero(dim, dim)),
      sum_sq_imag_(grid_points, Eigen::MatrixXd::Zero(dim, dim)) {}

void OuterProductAccumulator::add(std::size_t k, const Eigen::VectorXcd& v) {
    const int dim = static_cast<int>(v.size());
    auto& s = sum_[k];
    auto& sr = sum_sq_real_[k];
    auto& si = sum_sq_imag_[k];
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            const std::complex<double> o = v[i] * std::conj(v[j]);
            s(i, j) += o;
            sr(i, j) += o.real() * o.real();
            si(i, j) += o.imag() * o.imag();
        }
    }
    if (k == 0) ++count_;
}

void OuterProductAccumulator::merge(const OuterProductAccumulator& other) {
    for (std::size_t k = 0; k < sum_.size(); ++k) {
        sum_[k] += other.sum_[k];
        sum_sq_real_[k] += other.sum_sq_real_[k];
        sum_sq_imag_[k] += other.sum_sq_imag_[k];
    }
    count_ += other.count_;
}

EnsembleResult OuterProductAccumulator::finalize(std::span<const double> z_grid) const {
    if (count_ == 0) throw std::invalid_argument("ensemble reduction needs at least one trajectory");
    EnsembleResult result;
    result.z.assign(z_grid.begin(), z_grid.end());
    result.trajectories = count_;
    const double m = static_cast<double>(count_);
    result.rho.resize(sum_.size());
    for (std::size_t k = 0; k < sum_.size(); ++k) {
        EnsembleMoment& mom = result.rho[k];
        mom.mean = sum_[k] / m;
        const Eigen::MatrixXd mr = mom.mean.real();
        const Eigen::MatrixXd mi = mom.mean.imag();
        if (count_ > 1) {
            // SE of the mean with Bessel correction, clipped at zero.
            mom.se_real = ((sum_sq_real_[k] / m - mr.cwiseProduct(mr)).cwiseMax(0.0) / (m - 1.0))
                              .cwiseSqrt();
            mom.se_imag = ((sum_sq_imag_[k] / m - mi.cwiseProduct(mi)).cwiseMax(0.0) / (m - 1.0))
                              .cwiseSqrt();
        } else {
            mom.se_real = Eigen::MatrixXd::Zero(mr.rows(), mr.cols());
            mom.se_imag = mom.se_real;
        }
    }
    return result;
}

EnsembleResult ensemble_reduce(std::span<const AmplitudeSeries> trajectories) {
    if (trajectories.empty()) {
        throw std::invalid_argument("ensemble_reduce: need at least one trajectory");
    }
    const auto& grid = trajectories.front().z;
    const int dim = static_cast<int>(trajectories.front().psi.front().size());
    OuterProductAccumulator acc(dim, grid.size());
    for (const auto& t : trajectories) {
        if (t.z != grid) throw std::invalid_argument("ensemble_reduce: mismatched grids");
        for (std::size_t k = 0; k < grid.size(); ++k) acc.add(k, t.psi[k]);
    }
    return acc.finalize(grid);
}

// ---------------------------------------------------------------------------
// Ensemble runners
// ---------------------------------------------------------------------------

namespace {

EnsembleResult merge_slots(std::vector<OuterProductAccumulator>& slots, int dim,
                           std::span<const double> z_grid, const EnsembleOptions& opts) {
    OuterProductAccumulator total(dim, z_grid.size());
    for (const auto& s : slots) total.merge(s);
    EnsembleResult result = total.finalize(z_grid);
    result.seed = opts.seed;
    return result;
}

}  // namespace

EnsembleResult run_single_ensemble(const NetworkSpec& spec, const Eigen::VectorXcd& psi0,
                                   std::span<const double> z_grid, const EnsembleOptions& opts) {
    validate_or_throw(spec);
    detail::check_grid(z_grid);
    if (opts.trajectories < 1) throw std::invalid_argument("ensemble_size must be >= 1");
    if (psi0.size() != spec.num_sites) {
        throw std::invalid_argument("run_single_ensemble: psi0 dimension mismatch");
    }
    if (std::abs(psi0.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("run_single_ensemble: psi0 must be normalized");
    }

    const int dim = spec.num_sites;
    const Eigen::VectorXd amplitude = detail::phi_amplitude(spec, opts.mode, opts.wiener_step);
    const double seg_len = detail::phi_segment_length(spec, opts.mode, opts.wiener_step);
    const detail::WienerDrift drift(spec);

    std::vector<OuterProductAccumulator> slots(
        detail::chunk_count(opts.trajectories), OuterProductAccumulator(dim, z_grid.size()));

    detail::run_chunked(opts.trajectories, opts.threads, [&](std::uint64_t chunk,
                                                             detail::ChunkRange range) {
        OuterProductAccumulator acc(dim, z_grid.size());
        std::vector<Eigen::VectorXcd> states(z_grid.size());
        for (std::uint64_t t = range.begin; t < range.end; ++t) {
            detail::StreamedPhiRows rows(amplitude, opts.seed, t);
            if (opts.mode == NoiseMode::piecewise_constant) {
                detail::PiecewiseVectorKernel kernel(spec, psi0);
                kernel.out = &states;
                walk_segments(seg_len, z_grid.back() + 1.0, rows, z_grid, kernel);
            } else {
                detail::walk_wiener_vector(drift, psi0, opts.renormalize, seg_len,
                                           z_grid.back() + 1.0, rows, z_grid, states);
            }
            for (std::size_t k = 0; k < states.size(); ++k) acc.add(k, states[k]);
        }
        slots[chunk] = std::move(acc);
    });
    return merge_slots(slots, dim, z_grid, opts);
}

TwoParticleEnsembleResult run_two_ensemble(const NetworkSpec& spec, const Eigen::MatrixXcd& phi,
                                           PairStatistics statistics,
                                           std::span<const double> z_grid,
                                           const EnsembleOptions& opts) {
    validate_or_throw(spec);
    detail::check_grid(z_grid);
    if (opts.trajectories < 1) throw std::invalid_argument("ensemble_size must be >= 1");

    const int n = spec.num_sites;
    const int dim = n * n;
    if (phi.rows() != n || phi.cols() != n) {
        throw std::invalid_argument("run_two_ensemble: phi must be num_sites x num_sites");
    }
    Eigen::MatrixXcd a = phi.transpose();
    if (statistics == PairStatistics::boson) {
        a += phi;
    } else {
        a -= phi;
    }
    const double norm2 = a.squaredNorm();
    if (norm2 < 1e-24) {
        throw std::invalid_argument("run_two_ensemble: degenerate input profile");
    }
    const double scale = 1.0 / std::sqrt(norm2);

    std::vector<OuterProductAccumulator> slots(
        detail::chunk_count(opts.trajectories), OuterProductAccumulator(dim, z_grid.size()));

    const Eigen::VectorXd amplitude = detail::phi_amplitude(spec, opts.mode, opts.wiener_step);
    const double seg_len = detail::phi_segment_length(spec, opts.mode, opts.wiener_step);
    detail::WienerDrift drift(spec);

    detail::run_chunked(opts.trajectories, opts.threads, [&](std::uint64_t chunk,
                                                             detail::ChunkRange range) {
        OuterProductAccumulator acc(dim, z_grid.size());
        std::vector<Eigen::MatrixXcd> u_at(z_grid.size());
        Eigen::MatrixXcd psi(n, n);
        Eigen::VectorXcd flat(dim);
        for (std::uint64_t t = range.begin; t < range.end; ++t) {
            detail::StreamedPhiRows rows(amplitude, opts.seed, t);
            if (opts.mode == NoiseMode::piecewise_constant) {
                detail::PiecewiseMatrixKernel kernel(spec);
                kernel.out = &u_at;
                walk_segments(seg_len, z_grid.back() + 1.0, rows, z_grid, kernel);
            } else {
                detail::walk_wiener_matrix(drift, opts.renormalize, seg_len,
                                           z_grid.back() + 1.0, rows, z_grid, u_at);
            }
            for (std::size_t k = 0; k < z_grid.size(); ++k) {
                psi.noalias() = u_at[k] * a * u_at[k].transpose();
                for (int p = 0; p < n; ++p) {
                    for (int q = 0; q < n; ++q) flat[p * n + q] = scale * psi(p, q);
                }
                acc.add(k, flat);
            }
        }
        slots[chunk] = std::move(acc);
    });

    TwoParticleEnsembleResult result;
    result.reduced = merge_slots(slots, dim, z_grid, opts);
    result.input_scale = scale;
    return result;
}

}  // namespace dephnet
