// noise.hpp — Reproducible site-energy fluctuation sampling
//
// All randomness flows through a keyed counter generator: a draw is a pure
// function of (master seed, trajectory index, site, segment index), so
// ensembles are bit-identical for any worker count or scheduling order, and
// a materialized realization matches on-the-fly streaming exactly.

#pragma once

#include "dephnet/network.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <utility>

namespace dephnet {

enum class NoiseMode { piecewise_constant, wiener };

// ---------------------------------------------------------------------------
// Keyed counter generator (SplitMix64 mixing + Box-Muller)
// ---------------------------------------------------------------------------
namespace rng {

// SplitMix64 finalizer; full-avalanche 64-bit mixing.
std::uint64_t mix64(std::uint64_t x);

// Chain the key components through mix64.
std::uint64_t derive_key(std::uint64_t seed, std::uint64_t trajectory,
                         std::uint64_t site, std::uint64_t counter);

// Uniform double in (0, 1], from the top 53 bits.
double uniform01(std::uint64_t bits);

// Box-Muller pair of independent standard normals from one key.
std::pair<double, double> normal_pair(std::uint64_t key);

// Standard normal draw number `counter` of the stream
// (seed, trajectory, site); consecutive counters share a Box-Muller pair.
double standard_normal(std::uint64_t seed, std::uint64_t trajectory,
                       std::uint64_t site, std::uint64_t counter);

}  // namespace rng

// ---------------------------------------------------------------------------
// Realizations
// ---------------------------------------------------------------------------

// One sampled detuning path phi_n(z): piecewise-constant over segments of
// length segment_length. In piecewise_constant mode segments are the
// physical correlation length and Var(phi_n) = sigma_n^2; in wiener mode
// segments are integrator steps of length h and Var(phi_n) = gamma_n / h,
// so that phi_n * h = sqrt(gamma_n) * dW_n with dW ~ N(0, h).
struct NoiseRealization {
    NoiseMode mode{NoiseMode::piecewise_constant};
    double segment_length{1.0};  // cm
    double total_length{0.0};    // cm; last segment may be shorter
    Eigen::MatrixXd detunings;   // segments x sites, cm^-1
    std::uint64_t seed{0};
    std::uint64_t trajectory{0};

    int num_segments() const { return static_cast<int>(detunings.rows()); }
    int num_sites() const { return static_cast<int>(detunings.cols()); }
    // Length of segment s (the final one is truncated to total_length).
    double segment_extent(int s) const;
};

// Draw the piecewise-constant experimental realization for `spec` (requires
// calibration). Segment count = ceil(total_length / correlation_length).
NoiseRealization sample_piecewise(const NetworkSpec& spec, double total_length,
                                  std::uint64_t seed, std::uint64_t trajectory = 0);

// Draw the white-noise-limit realization at step h (uses spec.gamma).
NoiseRealization sample_wiener(const NetworkSpec& spec, double total_length,
                               double step, std::uint64_t seed,
                               std::uint64_t trajectory = 0);

// One vector of independent N(0, h) Wiener increments, draw index `counter`
// per site stream. Scaling by sqrt(gamma_n) happens in the integrator.
Eigen::VectorXd sample_wiener_step(int num_sites, double step, std::uint64_t seed,
                                   std::uint64_t trajectory, std::uint64_t counter);

// Streaming view used by the integrators: row s of the corresponding
// realization without materializing the full matrix. Bit-identical to
// NoiseRealization::detunings.row(s) by construction.
class NoiseStream {
public:
    NoiseStream(const NetworkSpec& spec, NoiseMode mode, double segment_length,
                std::uint64_t seed, std::uint64_t trajectory);

    void row(int segment, Eigen::VectorXd& phi_out) const;
    double segment_length() const { return segment_length_; }
    NoiseMode mode() const { return mode_; }

private:
    Eigen::VectorXd amplitude_;  // per-site std deviation of phi
    NoiseMode mode_;
    double segment_length_;
    std::uint64_t seed_;
    std::uint64_t trajectory_;
};

// CSV audit dump: header + one "segment,site,detuning" row per entry
// (1-based segment and site indices).
void write_noise_csv(std::ostream& os, const NoiseRealization& noise);

}  // namespace dephnet
