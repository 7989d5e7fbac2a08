#include "dephnet/noise.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace dephnet {

namespace rng {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t derive_key(std::uint64_t seed, std::uint64_t trajectory,
                         std::uint64_t site, std::uint64_t counter) {
    std::uint64_t k = mix64(seed ^ 0xD6E8FEB86659FD93ull);
    k = mix64(k ^ trajectory);
    k = mix64(k ^ (site + 0xA5A5A5A5A5A5A5A5ull));
    k = mix64(k ^ counter);
    return k;
}

double uniform01(std::uint64_t bits) {
    // (0, 1]: never 0, so log() below is safe.
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

std::pair<double, double> normal_pair(std::uint64_t key) {
    const double u1 = uniform01(key);
    const double u2 = uniform01(mix64(key ^ 0x2545F4914F6CDD1Dull));
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
}

double standard_normal(std::uint64_t seed, std::uint64_t trajectory,
                       std::uint64_t site, std::uint64_t counter) {
    const auto [z0, z1] = normal_pair(derive_key(seed, trajectory, site, counter >> 1));
    return (counter & 1) ? z1 : z0;
}

}  // namespace rng

double NoiseRealization::segment_extent(int s) const {
    const double start = s * segment_length;
    return std::min(segment_length, total_length - start);
}

namespace {

int segment_count(double total_length, double segment_length) {
    return static_cast<int>(std::ceil(total_length / segment_length - 1e-12));
}

NoiseRealization sample_impl(const Eigen::VectorXd& amplitude, NoiseMode mode,
                             double segment_length, double total_length,
                             std::uint64_t seed, std::uint64_t trajectory) {
    if (!(total_length > 0.0)) {
        throw std::invalid_argument("noise sampling: total_length must be positive");
    }
    NoiseRealization noise;
    noise.mode = mode;
    noise.segment_length = segment_length;
    noise.total_length = total_length;
    noise.seed = seed;
    noise.trajectory = trajectory;
    const int segments = segment_count(total_length, segment_length);
    const int n = static_cast<int>(amplitude.size());
    noise.detunings.resize(segments, n);
    for (int site = 0; site < n; ++site) {
        const double a = amplitude[site];
        for (int s = 0; s < segments; ++s) {
            noise.detunings(s, site) =
                a == 0.0 ? 0.0 : a * rng::standard_normal(seed, trajectory, site, s);
        }
    }
    return noise;
}

Eigen::VectorXd wiener_amplitude(const NetworkSpec& spec, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("noise sampling: step must be positive");
    return (spec.gamma.array() / step).sqrt();
}

}  // namespace

NoiseRealization sample_piecewise(const NetworkSpec& spec, double total_length,
                                  std::uint64_t seed, std::uint64_t trajectory) {
    if (!spec.calibration) {
        throw std::invalid_argument("sample_piecewise: network has no noise calibration");
    }
    return sample_impl(spec.calibration->sigma, NoiseMode::piecewise_constant,
                       spec.calibration->correlation_length, total_length, seed, trajectory);
}

NoiseRealization sample_wiener(const NetworkSpec& spec, double total_length, double step,
                               std::uint64_t seed, std::uint64_t trajectory) {
    return sample_impl(wiener_amplitude(spec, step), NoiseMode::wiener, step, total_length,
                       seed, trajectory);
}

Eigen::VectorXd sample_wiener_step(int num_sites, double step, std::uint64_t seed,
                                   std::uint64_t trajectory, std::uint64_t counter) {
    if (!(step > 0.0)) throw std::invalid_argument("sample_wiener_step: step must be positive");
    Eigen::VectorXd dw(num_sites);
    const double scale = std::sqrt(step);
    for (int site = 0; site < num_sites; ++site) {
        dw[site] = scale * rng::standard_normal(seed, trajectory, site, counter);
    }
    return dw;
}

NoiseStream::NoiseStream(const NetworkSpec& spec, NoiseMode mode, double segment_length,
                         std::uint64_t seed, std::uint64_t trajectory)
    : mode_(mode), segment_length_(segment_length), seed_(seed), trajectory_(trajectory) {
    if (mode == NoiseMode::piecewise_constant) {
        if (!spec.calibration) {
            throw std::invalid_argument("NoiseStream: network has no noise calibration");
        }
        amplitude_ = spec.calibration->sigma;
        segment_length_ = spec.calibration->correlation_length;
    } else {
        amplitude_ = wiener_amplitude(spec, segment_length);
    }
}

void NoiseStream::row(int segment, Eigen::VectorXd& phi_out) const {
    const int n = static_cast<int>(amplitude_.size());
    phi_out.resize(n);
    for (int site = 0; site < n; ++site) {
        const double a = amplitude_[site];
        phi_out[site] =
            a == 0.0 ? 0.0 : a * rng::standard_normal(seed_, trajectory_, site, segment);
    }
}

void write_noise_csv(std::ostream& os, const NoiseRealization& noise) {
    os << "segment,site,detuning\n";
    char buf[64];
    for (int s = 0; s < noise.num_segments(); ++s) {
        for (int n = 0; n < noise.num_sites(); ++n) {
            std::snprintf(buf, sizeof buf, "%.17g", noise.detunings(s, n));
            os << (s + 1) << ',' << (n + 1) << ',' << buf << '\n';
        }
    }
}

}  // namespace dephnet
