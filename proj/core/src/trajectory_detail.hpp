// trajectory_detail.hpp — internal stepping kernels shared by the public
// trajectory operations and the ensemble runners (not installed).
//
// One walker drives every integration so that materialized-noise and
// streamed-noise paths produce bit-identical states: segment boundaries are
// computed as (segment_index + 1) * segment_length products (no accumulation
// drift) and the per-step arithmetic lives in exactly one kernel per mode.

#pragma once

#include "dephnet/network.hpp"
#include "dephnet/noise.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace dephnet::detail {

inline constexpr double kWalkTol = 1e-9;

inline void check_grid(std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("z_grid must be non-empty");
    double prev = -1.0;
    for (double z : grid) {
        if (!(z >= 0.0) || !std::isfinite(z)) {
            throw std::invalid_argument("z_grid entries must be finite and non-negative");
        }
        if (z <= prev) throw std::invalid_argument("non-ascending grid");
        prev = z;
    }
}

// Walks segments of fixed nominal length, subdividing exactly at grid
// points. PhiRow(seg) -> const double* of per-site detunings; Kernel
// provides step(phi, dz) and emit(grid_index).
template <class PhiRow, class Kernel>
void walk_segments(double segment_length, double covered_length, PhiRow&& phi_row,
                   std::span<const double> grid, Kernel& kernel) {
    check_grid(grid);
    if (grid.back() > covered_length + kWalkTol) {
        throw std::invalid_argument("noise realization shorter than requested z");
    }
    double cur = 0.0;
    std::int64_t seg = 0;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const double target = grid[gi];
        while (cur < target - kWalkTol) {
            const double boundary = static_cast<double>(seg + 1) * segment_length;
            if (boundary <= target + kWalkTol) {
                const double dz = boundary - cur;
                if (dz > kWalkTol) kernel.step(phi_row(static_cast<int>(seg)), dz);
                cur = boundary;
                ++seg;
            } else {
                kernel.step(phi_row(static_cast<int>(seg)), target - cur);
                cur = target;
            }
        }
        kernel.emit(gi);
    }
}

// ---------------------------------------------------------------------------
// Piecewise-constant mode: exact segment exponentials
// ---------------------------------------------------------------------------

// Shared per-segment unitary builder: E = V exp(i lambda dz) V^T for the
// frozen H = diag(beta + phi) + kappa.
class SegmentExponential {
public:
    explicit SegmentExponential(const NetworkSpec& spec)
        : spec_(spec),
          n_(spec.num_sites),
          h_(n_, n_),
          vc_(n_, n_),
          phase_(n_),
          e_(n_, n_) {}

    const Eigen::MatrixXcd& unitary(const double* phi, double dz) {
        h_ = spec_.kappa;
        for (int i = 0; i < n_; ++i) h_(i, i) = spec_.beta_mean[i] + phi[i];
        solver_.compute(h_);
        const auto& lam = solver_.eigenvalues();
        for (int i = 0; i < n_; ++i) {
            phase_[i] = std::polar(1.0, lam[i] * dz);
        }
        vc_ = solver_.eigenvectors().cast<std::complex<double>>();
        e_.noalias() = vc_ * phase_.asDiagonal() * vc_.adjoint();
        return e_;
    }

private:
    const NetworkSpec& spec_;
    int n_;
    Eigen::MatrixXd h_;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver_;
    Eigen::MatrixXcd vc_;
    Eigen::VectorXcd phase_;
    Eigen::MatrixXcd e_;
};

struct PiecewiseMatrixKernel {
    SegmentExponential exp;
    Eigen::MatrixXcd U;
    Eigen::MatrixXcd tmp;
    std::vector<Eigen::MatrixXcd>* out{nullptr};

    explicit PiecewiseMatrixKernel(const NetworkSpec& spec)
        : exp(spec),
          U(Eigen::MatrixXcd::Identity(spec.num_sites, spec.num_sites)),
          tmp(spec.num_sites, spec.num_sites) {}

    void step(const double* phi, double dz) {
        tmp.noalias() = exp.unitary(phi, dz) * U;
        U.swap(tmp);
    }
    void emit(std::size_t gi) { (*out)[gi] = U; }
};

struct PiecewiseVectorKernel {
    SegmentExponential exp;
    Eigen::VectorXcd psi;
    Eigen::VectorXcd tmp;
    std::vector<Eigen::VectorXcd>* out{nullptr};

    PiecewiseVectorKernel(const NetworkSpec& spec, const Eigen::VectorXcd& psi0)
        : exp(spec), psi(psi0), tmp(spec.num_sites) {}

    void step(const double* phi, double dz) {
        tmp.noalias() = exp.unitary(phi, dz) * psi;
        psi.swap(tmp);
    }
    void emit(std::size_t gi) { (*out)[gi] = psi; }
};

// ---------------------------------------------------------------------------
// Wiener mode: Ito-Euler on flat arrays (hot path)
// ---------------------------------------------------------------------------

// Drift = i diag(beta) + i kappa - diag(gamma)/2, stored as split re/im
// row-major blocks.
struct WienerDrift {
    int n;
    std::vector<double> re, im;

    explicit WienerDrift(const NetworkSpec& spec) : n(spec.num_sites), re(n * n), im(n * n) {
        for (int p = 0; p < n; ++p) {
            for (int r = 0; r < n; ++r) {
                re[p * n + r] = (p == r) ? -0.5 * spec.gamma[p] : 0.0;
                im[p * n + r] = (p == r) ? spec.beta_mean[p] : spec.kappa(p, r);
            }
        }
    }
};

// State = n x n complex matrix, row-major split storage. The noise term uses
// the realization's detuning directly: i * phi_p * dz on row p (phi carries
// the sqrt(gamma/h) scale in wiener mode, so phi * h = sqrt(gamma) dW).
struct WienerMatrixKernel {
    const WienerDrift& drift;
    int n;
    bool renormalize;
    std::vector<double> ure, uim;  // U
    std::vector<double> tre, tim;  // drift * U
    std::vector<Eigen::MatrixXcd>* out{nullptr};

    WienerMatrixKernel(const WienerDrift& d, bool renorm)
        : drift(d), n(d.n), renormalize(renorm), ure(n * n, 0.0), uim(n * n, 0.0),
          tre(n * n), tim(n * n) {
        for (int i = 0; i < n; ++i) ure[i * n + i] = 1.0;
    }

    void step(const double* phi, double dz) {
        const int nn = n;
        // tmp = drift * U
        for (int p = 0; p < nn; ++p) {
            for (int c = 0; c < nn; ++c) {
                double ar = 0.0, ai = 0.0;
                for (int r = 0; r < nn; ++r) {
                    const double dr = drift.re[p * nn + r];
                    const double di = drift.im[p * nn + r];
                    const double xr = ure[r * nn + c];
                    const double xi = uim[r * nn + c];
                    ar += dr * xr - di * xi;
                    ai += dr * xi + di * xr;
                }
                tre[p * nn + c] = ar;
                tim[p * nn + c] = ai;
            }
        }
        // U += dz * tmp + i * (phi_p * dz) * U   (row p scaling uses old U)
        for (int p = 0; p < nn; ++p) {
            const double a = phi[p] * dz;
            for (int c = 0; c < nn; ++c) {
                const double xr = ure[p * nn + c];
                const double xi = uim[p * nn + c];
                ure[p * nn + c] = xr + dz * tre[p * nn + c] - a * xi;
                uim[p * nn + c] = xi + dz * tim[p * nn + c] + a * xr;
            }
        }
        if (renormalize) {
            for (int c = 0; c < nn; ++c) {
                double s = 0.0;
                for (int p = 0; p < nn; ++p) {
                    s += ure[p * nn + c] * ure[p * nn + c] + uim[p * nn + c] * uim[p * nn + c];
                }
                if (s > 0.0) {
                    const double inv = 1.0 / std::sqrt(s);
                    for (int p = 0; p < nn; ++p) {
                        ure[p * nn + c] *= inv;
                        uim[p * nn + c] *= inv;
                    }
                }
            }
        }
    }

    void emit(std::size_t gi) {
        Eigen::MatrixXcd& m = (*out)[gi];
        m.resize(n, n);
        for (int p = 0; p < n; ++p) {
            for (int c = 0; c < n; ++c) {
                m(p, c) = {ure[p * n + c], uim[p * n + c]};
            }
        }
    }
};

// Compile-time-size variant of the matrix kernel for the common small
// networks; arithmetic is expression-for-expression identical to the generic
// kernel. Every wiener integration dispatches through walk_wiener_* below,
// so one network size always runs one kernel and results stay bit-stable
// between materialized and streamed noise paths.
template <int N>
struct FixedWienerMatrixKernel {
    const WienerDrift& drift;
    bool renormalize;
    double ure[N * N], uim[N * N];
    double tre[N * N], tim[N * N];
    std::vector<Eigen::MatrixXcd>* out{nullptr};

    FixedWienerMatrixKernel(const WienerDrift& d, bool renorm)
        : drift(d), renormalize(renorm) {
        for (int i = 0; i < N * N; ++i) ure[i] = uim[i] = 0.0;
        for (int i = 0; i < N; ++i) ure[i * N + i] = 1.0;
    }

    void step(const double* phi, double dz) {
        const double* dre = drift.re.data();
        const double* dimm = drift.im.data();
        for (int p = 0; p < N; ++p) {
            for (int c = 0; c < N; ++c) {
                double ar = 0.0, ai = 0.0;
                for (int r = 0; r < N; ++r) {
                    const double dr = dre[p * N + r];
                    const double di = dimm[p * N + r];
                    const double xr = ure[r * N + c];
                    const double xi = uim[r * N + c];
                    ar += dr * xr - di * xi;
                    ai += dr * xi + di * xr;
                }
                tre[p * N + c] = ar;
                tim[p * N + c] = ai;
            }
        }
        for (int p = 0; p < N; ++p) {
            const double a = phi[p] * dz;
            for (int c = 0; c < N; ++c) {
                const double xr = ure[p * N + c];
                const double xi = uim[p * N + c];
                ure[p * N + c] = xr + dz * tre[p * N + c] - a * xi;
                uim[p * N + c] = xi + dz * tim[p * N + c] + a * xr;
            }
        }
        if (renormalize) {
            for (int c = 0; c < N; ++c) {
                double s = 0.0;
                for (int p = 0; p < N; ++p) {
                    s += ure[p * N + c] * ure[p * N + c] + uim[p * N + c] * uim[p * N + c];
                }
                if (s > 0.0) {
                    const double inv = 1.0 / std::sqrt(s);
                    for (int p = 0; p < N; ++p) {
                        ure[p * N + c] *= inv;
                        uim[p * N + c] *= inv;
                    }
                }
            }
        }
    }

    void emit(std::size_t gi) {
        Eigen::MatrixXcd& m = (*out)[gi];
        m.resize(N, N);
        for (int p = 0; p < N; ++p) {
            for (int c = 0; c < N; ++c) m(p, c) = {ure[p * N + c], uim[p * N + c]};
        }
    }
};

struct WienerVectorKernel {
    const WienerDrift& drift;
    int n;
    bool renormalize;
    std::vector<double> vre, vim;
    std::vector<double> tre, tim;
    std::vector<Eigen::VectorXcd>* out{nullptr};

    WienerVectorKernel(const WienerDrift& d, const Eigen::VectorXcd& psi0, bool renorm)
        : drift(d), n(d.n), renormalize(renorm), vre(n), vim(n), tre(n), tim(n) {
        for (int i = 0; i < n; ++i) {
            vre[i] = psi0[i].real();
            vim[i] = psi0[i].imag();
        }
    }

    void step(const double* phi, double dz) {
        const int nn = n;
        for (int p = 0; p < nn; ++p) {
            double ar = 0.0, ai = 0.0;
            for (int r = 0; r < nn; ++r) {
                const double dr = drift.re[p * nn + r];
                const double di = drift.im[p * nn + r];
                ar += dr * vre[r] - di * vim[r];
                ai += dr * vim[r] + di * vre[r];
            }
            tre[p] = ar;
            tim[p] = ai;
        }
        for (int p = 0; p < nn; ++p) {
            const double a = phi[p] * dz;
            const double xr = vre[p];
            const double xi = vim[p];
            vre[p] = xr + dz * tre[p] - a * xi;
            vim[p] = xi + dz * tim[p] + a * xr;
        }
        if (renormalize) {
            double s = 0.0;
            for (int p = 0; p < nn; ++p) s += vre[p] * vre[p] + vim[p] * vim[p];
            if (s > 0.0) {
                const double inv = 1.0 / std::sqrt(s);
                for (int p = 0; p < nn; ++p) {
                    vre[p] *= inv;
                    vim[p] *= inv;
                }
            }
        }
    }

    void emit(std::size_t gi) {
        Eigen::VectorXcd& v = (*out)[gi];
        v.resize(n);
        for (int p = 0; p < n; ++p) v[p] = {vre[p], vim[p]};
    }
};

template <int N>
struct FixedWienerVectorKernel {
    const WienerDrift& drift;
    bool renormalize;
    double vre[N], vim[N];
    double tre[N], tim[N];
    std::vector<Eigen::VectorXcd>* out{nullptr};

    FixedWienerVectorKernel(const WienerDrift& d, const Eigen::VectorXcd& psi0, bool renorm)
        : drift(d), renormalize(renorm) {
        for (int i = 0; i < N; ++i) {
            vre[i] = psi0[i].real();
            vim[i] = psi0[i].imag();
        }
    }

    void step(const double* phi, double dz) {
        const double* dre = drift.re.data();
        const double* dimm = drift.im.data();
        for (int p = 0; p < N; ++p) {
            double ar = 0.0, ai = 0.0;
            for (int r = 0; r < N; ++r) {
                const double dr = dre[p * N + r];
                const double di = dimm[p * N + r];
                ar += dr * vre[r] - di * vim[r];
                ai += dr * vim[r] + di * vre[r];
            }
            tre[p] = ar;
            tim[p] = ai;
        }
        for (int p = 0; p < N; ++p) {
            const double a = phi[p] * dz;
            const double xr = vre[p];
            const double xi = vim[p];
            vre[p] = xr + dz * tre[p] - a * xi;
            vim[p] = xi + dz * tim[p] + a * xr;
        }
        if (renormalize) {
            double s = 0.0;
            for (int p = 0; p < N; ++p) s += vre[p] * vre[p] + vim[p] * vim[p];
            if (s > 0.0) {
                const double inv = 1.0 / std::sqrt(s);
                for (int p = 0; p < N; ++p) {
                    vre[p] *= inv;
                    vim[p] *= inv;
                }
            }
        }
    }

    void emit(std::size_t gi) {
        Eigen::VectorXcd& v = (*out)[gi];
        v.resize(N);
        for (int p = 0; p < N; ++p) v[p] = {vre[p], vim[p]};
    }
};

// Uniform dispatch: one kernel per network size, everywhere.
template <class PhiRow>
void walk_wiener_matrix(const WienerDrift& drift, bool renormalize, double segment_length,
                        double covered_length, PhiRow&& rows, std::span<const double> grid,
                        std::vector<Eigen::MatrixXcd>& out) {
    switch (drift.n) {
        case 2: {
            FixedWienerMatrixKernel<2> k(drift, renormalize);
            k.out = &out;
            walk_segments(segment_length, covered_length, rows, grid, k);
            return;
        }
        case 3: {
            FixedWienerMatrixKernel<3> k(drift, renormalize);
            k.out = &out;
            walk_segments(segment_length, covered_length, rows, grid, k);
            return;
        }
        default: {
            WienerMatrixKernel k(drift, renormalize);
            k.out = &out;
            walk_segments(segment_length, covered_length, rows, grid, k);
            return;
        }
    }
}

template <class PhiRow>
void walk_wiener_vector(const WienerDrift& drift, const Eigen::VectorXcd& psi0, bool renormalize,
                        double segment_length, double covered_length, PhiRow&& rows,
                        std::span<const double> grid, std::vector<Eigen::VectorXcd>& out) {
    switch (drift.n) {
        case 2: {
            FixedWienerVectorKernel<2> k(drift, psi0, renormalize);
            k.out = &out;
            walk_segments(segment_length, covered_length, rows, grid, k);
            return;
        }
        case 3: {
            FixedWienerVectorKernel<3> k(drift, psi0, renormalize);
            k.out = &out;
            walk_segments(segment_length, covered_length, rows, grid, k);
            return;
        }
        default: {
            WienerVectorKernel k(drift, psi0, renormalize);
            k.out = &out;
            walk_segments(segment_length, covered_length, rows, grid, k);
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// Streamed noise rows with Box-Muller pair caching (bitwise equal to
// NoiseRealization rows for the same seed/trajectory).
// ---------------------------------------------------------------------------
class StreamedPhiRows {
public:
    StreamedPhiRows(const Eigen::VectorXd& amplitude, std::uint64_t seed,
                    std::uint64_t trajectory)
        : amp_(amplitude), seed_(seed), traj_(trajectory), n_(static_cast<int>(amplitude.size())),
          row_(n_), pair_index_(n_, static_cast<std::uint64_t>(-1)), pair_(n_) {}

    const double* operator()(int seg) {
        const auto s = static_cast<std::uint64_t>(seg);
        for (int site = 0; site < n_; ++site) {
            if (amp_[site] == 0.0) {
                row_[site] = 0.0;
                continue;
            }
            const std::uint64_t pi = s >> 1;
            if (pair_index_[site] != pi) {
                pair_[site] = rng::normal_pair(rng::derive_key(seed_, traj_, site, pi));
                pair_index_[site] = pi;
            }
            row_[site] = amp_[site] * ((s & 1) ? pair_[site].second : pair_[site].first);
        }
        return row_.data();
    }

private:
    Eigen::VectorXd amp_;
    std::uint64_t seed_;
    std::uint64_t traj_;
    int n_;
    std::vector<double> row_;
    std::vector<std::uint64_t> pair_index_;
    std::vector<std::pair<double, double>> pair_;
};

// Per-site standard deviation of phi for the given mode.
inline Eigen::VectorXd phi_amplitude(const NetworkSpec& spec, NoiseMode mode, double step) {
    if (mode == NoiseMode::piecewise_constant) {
        if (!spec.calibration) {
            throw std::invalid_argument("piecewise noise requires a network calibration");
        }
        return spec.calibration->sigma;
    }
    if (!(step > 0.0)) throw std::invalid_argument("wiener step must be positive");
    return (spec.gamma.array() / step).sqrt();
}

inline double phi_segment_length(const NetworkSpec& spec, NoiseMode mode, double step) {
    return mode == NoiseMode::piecewise_constant ? spec.calibration->correlation_length : step;
}

}  // namespace dephnet::detail
