#include "dephnet/verify.hpp"

#include "dephnet/analysis.hpp"
#include "dephnet/master.hpp"
#include "dephnet/network.hpp"
#include "dephnet/noise.hpp"
#include "dephnet/states.hpp"
#include "dephnet/trajectory.hpp"
#include "ensemble_detail.hpp"
#include "trajectory_detail.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace dephnet {

namespace {

constexpr std::uint64_t kVerifySeed = 0xD0C5EEDull;

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

struct Check {
    bool ok{true};
    std::ostringstream detail;

    void require(bool cond, const std::string& line) {
        ok = ok && cond;
        detail << (cond ? "  ok:   " : "  FAIL: ") << line << '\n';
    }
    void note(const std::string& line) { detail << "  note: " << line << '\n'; }
};

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / (n - 1);
    return v;
}

Eigen::MatrixXcd site_projector(int n, int site) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
    rho(site, site) = 1.0;
    return rho;
}

// Conservation maxima over deterministic evolutions; criterion 10 collects
// these from its own pass over every integration in criteria 1-9.
struct ConservationLedger {
    double trace_drift{0.0};
    double hermiticity{0.0};
    double min_eigenvalue{1.0};
    int records{0};

    void add(const EvolutionRecord& record) {
        const auto rep = conservation_report(record);
        trace_drift = std::max(trace_drift, rep.max_trace_drift);
        hermiticity = std::max(hermiticity, rep.max_hermiticity_defect);
        min_eigenvalue = std::min(min_eigenvalue, rep.min_eigenvalue);
        records += static_cast<int>(record.size());
    }
    void add_matrix(const Eigen::MatrixXcd& rho) {
        EvolutionRecord rec;
        rec.order = MatrixOrder::two;
        rec.num_sites = static_cast<int>(std::lround(std::sqrt(double(rho.rows()))));
        rec.z = {0.0};
        rec.rho = {rho};
        add(rec);
    }
};

// ---------------------------------------------------------------------------
// Criterion bodies. Each returns measured values through Check; the caller
// stamps ids/names/timing.
// ---------------------------------------------------------------------------

void crit_single_steady_uniform(Check& c, ConservationLedger* ledger) {
    const auto spec = paper_trimer(TrimerProfile::classical);
    const auto grid = linspace(0.0, 100.0, 201);
    const auto record = integrate(build_single_liouvillian(spec), site_projector(3, 0), grid);
    if (ledger) ledger->add(record);
    const auto& last = record.rho.back();
    double diag_dev = 0.0;
    for (int i = 0; i < 3; ++i) diag_dev = std::max(diag_dev, std::abs(last(i, i).real() - 1.0 / 3.0));
    const double offdiag = record.max_offdiagonal(record.size() - 1);
    c.require(diag_dev <= 2e-3, "max |population - 1/3| at z=100: " + fmt(diag_dev) + " <= 2e-3");
    c.require(offdiag <= 1e-3, "max off-diagonal magnitude at z=100: " + fmt(offdiag) + " <= 1e-3");
}

void crit_two_boson_steady_values(Check& c, ConservationLedger* ledger) {
    const auto spec = paper_trimer(TrimerProfile::quantum);
    const auto result = steady_state(build_two_liouvillian(spec), SectorFilter::boson);
    if (ledger) ledger->add_matrix(result.rho);
    const int n = 3;
    double bunch_min = 1.0, bunch_max = 0.0, anti_min = 1.0, anti_max = 0.0, coh_min = 1.0;
    for (int p = 0; p < n; ++p) {
        const double b = result.rho(pair_index(p, p, n), pair_index(p, p, n)).real();
        bunch_min = std::min(bunch_min, b);
        bunch_max = std::max(bunch_max, b);
        for (int q = 0; q < n; ++q) {
            if (p == q) continue;
            const double a = result.rho(pair_index(p, q, n), pair_index(p, q, n)).real();
            anti_min = std::min(anti_min, a);
            anti_max = std::max(anti_max, a);
            coh_min = std::min(coh_min,
                               std::abs(result.rho(pair_index(p, q, n), pair_index(q, p, n))));
        }
    }
    c.note("computed steady state is the symmetric-subspace mixture P_sym/6: bunching 1/6, "
           "anti-bunching 1/12");
    c.note("null-space dimension " + std::to_string(result.null_space_dimension) +
           ", boson-sector dimension " + std::to_string(result.sector_dimension) +
           ", residual " + fmt(result.residual));
    c.require(bunch_min >= 0.14 && bunch_max <= 0.16,
              "bunching diagonals in [0.14, 0.16] (reference 0.15 +/- 0.01): measured [" +
                  fmt(bunch_min) + ", " + fmt(bunch_max) + "]");
    c.require(anti_min >= 0.08 && anti_max <= 0.10,
              "anti-bunching diagonals in [0.08, 0.10] (reference 0.09 +/- 0.01): measured [" +
                  fmt(anti_min) + ", " + fmt(anti_max) + "]");
    c.require(coh_min >= 0.05,
              "exchange-conjugate coherence magnitudes >= 0.05: min " + fmt(coh_min));
}

void crit_steady_universality(Check& c, ConservationLedger* ledger) {
    const auto spec = paper_trimer(TrimerProfile::quantum);
    const auto liou = build_two_liouvillian(spec);
    MasterIntegrator integrator(liou);
    const auto grid = linspace(0.0, 100.0, 101);
    const InitialStateKind kinds[] = {InitialStateKind::separable_boson,
                                      InitialStateKind::path_entangled_boson,
                                      InitialStateKind::classically_correlated};
    const char* names[] = {"separable_boson", "path_entangled_boson", "classically_correlated"};
    std::vector<Eigen::MatrixXcd> finals;
    for (auto kind : kinds) {
        const auto record = integrator.integrate(make_initial(kind, 3, 0, 1), grid);
        if (ledger) ledger->add(record);
        finals.push_back(record.rho.back());
    }
    double pairwise = 0.0;
    for (std::size_t i = 0; i < finals.size(); ++i) {
        for (std::size_t k = i + 1; k < finals.size(); ++k) {
            pairwise = std::max(pairwise, (finals[i] - finals[k]).norm());
        }
    }
    const auto ss = steady_state(liou, SectorFilter::boson);
    double to_null = 0.0;
    for (std::size_t i = 0; i < finals.size(); ++i) {
        const double d = (finals[i] - ss.rho).norm();
        to_null = std::max(to_null, d);
        c.note(std::string(names[i]) + " -> distance to null-space state at z=100: " + fmt(d));
    }
    c.require(pairwise <= 1e-4, "pairwise Frobenius distance at z=100: " + fmt(pairwise) + " <= 1e-4");
    c.require(to_null <= 1e-4, "distance to null-space steady state: " + fmt(to_null) + " <= 1e-4");
}

void crit_incoherence_preservation(Check& c, ConservationLedger* ledger) {
    const auto spec = paper_trimer(TrimerProfile::quantum);
    const auto grid = linspace(0.5, 100.0, 200);
    const auto record = integrate(build_two_liouvillian(spec),
                                  make_initial(InitialStateKind::incoherent_distinguishable, 3, 0, 1),
                                  grid);
    if (ledger) ledger->add(record);
    double worst = 0.0;
    double worst_z = 0.0;
    for (std::size_t k = 0; k < record.size(); ++k) {
        const double m = record.max_exchange_coherence(k);
        if (m > worst) {
            worst = m;
            worst_z = record.z[k];
        }
    }
    c.note("the mixture splits as (|s><s| + |a><a|)/2, so the exchange element equals half the "
           "boson-fermion coincidence difference and peaks early in the transit");
    c.note("steady-state exchange value is (1/12 - 1/6)/2 = -1/24");
    c.require(worst <= 1e-8, "max exchange-conjugate coherence over 200 grid points: " +
                                 fmt(worst) + " at z=" + fmt(worst_z) + " <= 1e-8");
}

void crit_frozen_coupling_decay_rates(Check& c, ConservationLedger* ledger) {
    auto spec = paper_trimer(TrimerProfile::quantum);
    spec.kappa.setZero();
    spec.calibration.reset();  // gamma stays; kappa frozen
    const auto grid = linspace(0.0, 2.0, 81);
    const auto& g = spec.gamma;

    // Single-particle: start from the all-ones projector so every element is
    // populated; each decays at (gamma_n + gamma_m)/2.
    {
        Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Constant(3, 3, 1.0 / 3.0);
        const auto record = integrate(build_single_liouvillian(spec), rho0, grid);
        if (ledger) ledger->add(record);
        double worst_rel = 0.0, worst_zero = 0.0;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const auto fit = coherence_decay_fit(record, a, b);
                const double expected = a == b ? 0.0 : 0.5 * (g[a] + g[b]);
                if (expected > 1e-6) {
                    worst_rel = std::max(worst_rel, std::abs(fit.rate - expected) / expected);
                } else {
                    worst_zero = std::max(worst_zero, std::abs(fit.rate));
                }
            }
        }
        c.require(worst_rel <= 0.01,
                  "single-particle fitted rates vs coefficients, worst relative error: " +
                      fmt(worst_rel) + " <= 1e-2");
        c.require(worst_zero <= 1e-6,
                  "single-particle zero-rate elements, worst |rate|: " + fmt(worst_zero) + " <= 1e-6");
    }

    // Two-particle: all-ones projector on the pair space; the coefficient of
    // element ((p,q),(p',q')) follows the generator's dephasing term.
    {
        Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Constant(9, 9, 1.0 / 9.0);
        const auto record = integrate(build_two_liouvillian(spec), rho0, grid);
        if (ledger) ledger->add(record);
        double worst_rel = 0.0, worst_zero = 0.0;
        for (int p = 0; p < 3; ++p) {
         for (int q = 0; q < 3; ++q) {
          for (int pp = 0; pp < 3; ++pp) {
           for (int qq = 0; qq < 3; ++qq) {
               double coef = -0.5 * (g[p] + g[q] + g[pp] + g[qq]);
               if (p == pp) coef += std::sqrt(g[p] * g[pp]);
               if (p == qq) coef += std::sqrt(g[p] * g[qq]);
               if (q == pp) coef += std::sqrt(g[q] * g[pp]);
               if (q == qq) coef += std::sqrt(g[q] * g[qq]);
               if (p == q) coef -= std::sqrt(g[p] * g[q]);
               if (pp == qq) coef -= std::sqrt(g[pp] * g[qq]);
               const double expected = -coef;
               const auto fit = coherence_decay_fit(record, pair_index(p, q, 3),
                                                    pair_index(pp, qq, 3));
               if (expected > 1e-6) {
                   worst_rel = std::max(worst_rel, std::abs(fit.rate - expected) / expected);
               } else {
                   worst_zero = std::max(worst_zero, std::abs(fit.rate));
               }
           }
          }
         }
        }
        c.require(worst_rel <= 0.01,
                  "two-particle fitted rates vs coefficients, worst relative error: " +
                      fmt(worst_rel) + " <= 1e-2");
        c.require(worst_zero <= 1e-6,
                  "two-particle zero-rate elements (diagonal and exchange-conjugate), worst |rate|: " +
                      fmt(worst_zero) + " <= 1e-6");
    }
}

void crit_trajectory_master_equivalence(Check& c, unsigned threads) {
    const auto spec = paper_trimer(TrimerProfile::quantum);
    const int n = 3;
    const std::vector<double> grid = {1.0, 5.0, 12.0};
    const std::uint64_t m_traj = 5000;
    const double h = 1e-4;
    c.note("wiener-mode Ito-Euler step 1e-4 (module default 1e-3 carries an O(h) scale bias "
           "larger than 4 SE at this ensemble size)");

    // One propagator sweep feeds both the single-particle (launch column) and
    // the symmetrized pair reductions.
    const Eigen::MatrixXcd phi =
        pure_input_profile(InitialStateKind::separable_boson, n, 0, 1);
    Eigen::MatrixXcd sym = phi.transpose() + phi;
    const double scale = 1.0 / std::sqrt(sym.squaredNorm());

    const Eigen::VectorXd amplitude = detail::phi_amplitude(spec, NoiseMode::wiener, h);
    const detail::WienerDrift drift(spec);
    const auto chunks = detail::chunk_count(m_traj);
    std::vector<OuterProductAccumulator> single_slots(chunks, OuterProductAccumulator(n, grid.size()));
    std::vector<OuterProductAccumulator> two_slots(chunks,
                                                   OuterProductAccumulator(n * n, grid.size()));

    detail::run_chunked(m_traj, threads, [&](std::uint64_t chunk, detail::ChunkRange range) {
        OuterProductAccumulator acc1(n, grid.size());
        OuterProductAccumulator acc2(n * n, grid.size());
        std::vector<Eigen::MatrixXcd> u_at(grid.size());
        Eigen::MatrixXcd psi2(n, n);
        Eigen::VectorXcd flat(n * n);
        for (std::uint64_t t = range.begin; t < range.end; ++t) {
            detail::StreamedPhiRows rows(amplitude, kVerifySeed, t);
            detail::walk_wiener_matrix(drift, false, h, grid.back() + 1.0, rows, grid, u_at);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                acc1.add(k, u_at[k].col(0));
                psi2.noalias() = u_at[k] * sym * u_at[k].transpose();
                for (int p = 0; p < n; ++p) {
                    for (int q = 0; q < n; ++q) flat[pair_index(p, q, n)] = scale * psi2(p, q);
                }
                acc2.add(k, flat);
            }
        }
        single_slots[chunk] = std::move(acc1);
        two_slots[chunk] = std::move(acc2);
    });
    OuterProductAccumulator total1(n, grid.size());
    OuterProductAccumulator total2(n * n, grid.size());
    for (std::size_t i = 0; i < chunks; ++i) {
        total1.merge(single_slots[i]);
        total2.merge(two_slots[i]);
    }
    const auto mc1 = total1.finalize(grid);
    const auto mc2 = total2.finalize(grid);

    const auto exact1 = integrate(build_single_liouvillian(spec), site_projector(n, 0), grid);
    const auto exact2 = integrate(build_two_liouvillian(spec),
                                  make_initial(InitialStateKind::separable_boson, n, 0, 1), grid);

    const auto max_ratio = [](const EnsembleMoment& mom, const Eigen::MatrixXcd& exact) {
        double worst = 0.0;
        for (Eigen::Index i = 0; i < exact.rows(); ++i) {
            for (Eigen::Index j = 0; j < exact.cols(); ++j) {
                const double dre = std::abs(mom.mean(i, j).real() - exact(i, j).real());
                const double dim = std::abs(mom.mean(i, j).imag() - exact(i, j).imag());
                worst = std::max(worst, dre / std::max(mom.se_real(i, j), 1e-15));
                worst = std::max(worst, dim / std::max(mom.se_imag(i, j), 1e-15));
            }
        }
        return worst;
    };

    double worst1 = 0.0, worst2 = 0.0, min_sim = 1.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        worst1 = std::max(worst1, max_ratio(mc1.rho[k], exact1.rho[k]));
        worst2 = std::max(worst2, max_ratio(mc2.rho[k], exact2.rho[k]));
        min_sim = std::min(min_sim, similarity(g2_extract(mc2.rho[k].mean),
                                               g2_extract(exact2.rho[k])));
    }
    c.require(worst1 <= 4.0, "single-particle entrywise max |MC - master| / SE over z in {1,5,12}: " +
                                 fmt(worst1) + " <= 4");
    c.require(worst2 <= 4.0, "two-particle entrywise max |MC - master| / SE over z in {1,5,12}: " +
                                 fmt(worst2) + " <= 4");
    c.require(min_sim >= 0.99, "G2 similarity, min over z: " + fmt(min_sim) + " >= 0.99");
}

void crit_fermion_sector(Check& c, ConservationLedger* ledger) {
    const auto spec = paper_trimer(TrimerProfile::quantum);
    const auto liou = build_two_liouvillian(spec);
    MasterIntegrator integrator(liou);
    const auto grid = linspace(0.0, 100.0, 201);
    const auto record = integrator.integrate(
        make_initial(InitialStateKind::separable_fermion, 3, 0, 1), grid);
    if (ledger) ledger->add(record);
    double worst_diag = 0.0;
    for (std::size_t k = 0; k < record.size(); ++k) {
        for (int m = 0; m < 3; ++m) {
            const int mm = pair_index(m, m, 3);
            worst_diag = std::max(worst_diag, std::abs(record.rho[k](mm, mm)));
        }
    }
    const auto ss = steady_state(liou, SectorFilter::fermion);
    const Eigen::MatrixXcd at200 = integrator.propagate(record.rho.back(), 100.0);
    const double to_ss = (at200 - ss.rho).norm();
    double coh_min = 1.0;
    for (int p = 0; p < 3; ++p) {
        for (int q = p + 1; q < 3; ++q) {
            coh_min = std::min(coh_min, std::abs(ss.rho(pair_index(p, q, 3), pair_index(q, p, 3))));
        }
    }
    c.require(worst_diag <= 1e-10,
              "Pauli exclusion: max bunched-diagonal magnitude over all z: " + fmt(worst_diag) +
                  " <= 1e-10");
    c.require(to_ss <= 1e-6, "distance to fermion-sector null state at z=200: " + fmt(to_ss) + " <= 1e-6");
    c.require(coh_min >= 1e-3, "steady-state exchange coherence magnitudes (computed 1/6 each): min " +
                                   fmt(coh_min) + " >= 1e-3 (nonzero)");
}

void crit_dephasing_strength_ordering(Check& c, ConservationLedger* ledger) {
    const auto spec = paper_trimer(TrimerProfile::quantum);
    const auto rho0 = make_initial(InitialStateKind::path_entangled_boson, 3, 0, 1);
    const double factors[] = {0.5, 5.0, 10.0};
    std::vector<double> dist;
    for (double f : factors) {
        const auto scaled = scale_dephasing(spec, f);
        MasterIntegrator integrator(build_two_liouvillian(scaled));
        const auto record = integrator.integrate(rho0, linspace(0.0, 20.0, 41));
        if (ledger) ledger->add(record);
        const Eigen::MatrixXcd target = integrator.propagate(rho0, 1e5);
        dist.push_back((record.rho.back() - target).norm());
        c.note("factor " + fmt(f) + ": distance to steady state at z=20: " + fmt(dist.back()));
    }
    c.note("relaxation is non-monotonic in the dephasing strength (spectral gaps 0.072 / 0.243 / "
           "0.155 for factors 0.5 / 5 / 10): weak dephasing converges slowest here");
    c.require(dist[0] < dist[1] && dist[1] < dist[2],
              "distance at z=20 strictly increasing over factors {0.5, 5, 10}: measured " +
                  fmt(dist[0]) + " < " + fmt(dist[1]) + " < " + fmt(dist[2]));
}

void crit_noiseless_regression(Check& c, ConservationLedger* ledger) {
    // (a) max site-3 transfer in the noise-free trimer up to z=12.
    {
        auto spec = paper_trimer(TrimerProfile::classical);
        spec.gamma.setZero();
        spec.calibration->sigma.setZero();
        const auto noise = sample_piecewise(spec, 12.0, kVerifySeed);
        Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(3);
        psi0[0] = 1.0;
        const auto grid = linspace(0.0, 12.0, 1201);
        const auto series = evolve_amplitude(spec, noise, psi0, grid);
        double p3 = 0.0;
        double norm_defect = 0.0;
        for (const auto& psi : series.psi) {
            p3 = std::max(p3, std::norm(psi[2]));
            norm_defect = std::max(norm_defect, std::abs(psi.squaredNorm() - 1.0));
        }
        if (ledger) {
            ledger->trace_drift = std::max(ledger->trace_drift, norm_defect);
        }
        c.require(p3 <= 0.10 + 1e-3,
                  "max site-3 population over z <= 12 (noise-free trimer): " + fmt(p3) +
                      " <= 0.101");
    }
    // (b) Hong-Ou-Mandel coincidence dip on the noise-free 50:50 coupler.
    {
        NetworkSpec coupler;
        coupler.num_sites = 2;
        coupler.beta_mean = Eigen::Vector2d::Zero();
        coupler.kappa = Eigen::Matrix2d::Zero();
        coupler.kappa(0, 1) = coupler.kappa(1, 0) = 1.0;
        coupler.gamma = Eigen::Vector2d::Zero();
        NoiseCalibration calib;
        calib.sigma = Eigen::Vector2d::Zero();
        calib.correlation_length = 1.0;
        coupler.calibration = calib;

        const double z_half = std::numbers::pi / 4.0;  // kappa z = pi/4: 50:50 point
        const auto noise = sample_piecewise(coupler, z_half, kVerifySeed);
        const std::vector<double> grid = {z_half};
        const auto series = evolve_propagator(coupler, noise, grid);
        Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(2, 2);
        phi(0, 1) = 1.0 / std::sqrt(2.0);
        const auto psi = two_particle_amplitude(series.U.back(), phi, PairStatistics::boson);
        const double g2_12 = std::norm(psi(0, 1));
        c.require(g2_12 <= 1e-10, "coincidence G2_12 at the 50:50 point: " + fmt(g2_12) + " <= 1e-10");
    }
}

void crit_conservation_suite(Check& c, unsigned /*threads*/) {
    // Re-runs every deterministic integration from criteria 1-9 and collects
    // trace / Hermiticity / positivity maxima. Wiener-mode trajectories are
    // excluded: the first-order scheme conserves the norm only in the mean by
    // construction (renormalization off). Piecewise trajectories contribute
    // their per-realization norm defect.
    ConservationLedger ledger;
    Check scratch;
    crit_single_steady_uniform(scratch, &ledger);
    crit_two_boson_steady_values(scratch, &ledger);
    crit_steady_universality(scratch, &ledger);
    crit_incoherence_preservation(scratch, &ledger);
    crit_frozen_coupling_decay_rates(scratch, &ledger);
    crit_fermion_sector(scratch, &ledger);
    crit_dephasing_strength_ordering(scratch, &ledger);
    crit_noiseless_regression(scratch, &ledger);

    c.note("matrices checked: " + std::to_string(ledger.records));
    c.require(ledger.trace_drift <= 1e-8,
              "max trace drift (incl. piecewise norm defect): " + fmt(ledger.trace_drift) + " <= 1e-8");
    c.require(ledger.hermiticity <= 1e-10,
              "max Hermiticity defect: " + fmt(ledger.hermiticity) + " <= 1e-10");
    c.require(ledger.min_eigenvalue >= -1e-8,
              "min eigenvalue: " + fmt(ledger.min_eigenvalue) + " >= -1e-8");
}

void crit_single_coherence_extinction(Check& c, ConservationLedger* ledger) {
    const auto spec = paper_trimer(TrimerProfile::classical);
    const double factors[] = {0.3, 0.6, 1.0};
    bool all_ok = true;
    for (double f : factors) {
        const auto scaled = scale_dephasing(spec, f);
        const auto grid = linspace(0.0, 24.0, 481);
        const auto record =
            integrate(build_single_liouvillian(scaled), site_projector(3, 0), grid);
        if (ledger) ledger->add(record);
        double max_after_12 = 0.0;
        double at_12 = 0.0;
        for (std::size_t k = 0; k < record.size(); ++k) {
            if (record.z[k] >= 12.0 - 1e-9) {
                const double m = record.max_offdiagonal(k);
                max_after_12 = std::max(max_after_12, m);
                if (std::abs(record.z[k] - 12.0) < 1e-9) at_12 = m;
            }
        }
        const bool ok = max_after_12 <= 1e-3;
        all_ok = all_ok && ok;
        c.note("factor " + fmt(f) + ": max off-diagonal at z=12: " + fmt(at_12) +
               ", max over z in [12, 24]: " + fmt(max_after_12));
    }
    c.note("slowest coherence-bearing mode decays at ~0.18 cm^-1; magnitudes cross 1e-3 only near "
           "z~23 even at full strength");
    c.require(all_ok, "all single-particle off-diagonals <= 1e-3 from z=12 onward for factors "
                      "{0.3, 0.6, 1.0}");
}

struct CriterionSpec {
    int id;
    const char* name;
    bool expected_to_fail;
};

constexpr CriterionSpec kCriteria[] = {
    {1, "single-excitation uniform steady state", false},
    {2, "two-boson steady-state reference values", true},
    {3, "steady-state universality across inputs", false},
    {4, "incoherent-input exchange-coherence bound", true},
    {5, "frozen-coupling analytic decay rates", false},
    {6, "trajectory-master oracle equivalence", false},
    {7, "fermion sector: exclusion and surviving coherences", false},
    {8, "dephasing-strength convergence ordering", true},
    {9, "noiseless regressions (transfer bound, HOM dip)", false},
    {10, "conservation suite over criteria 1-9", false},
    {11, "single-particle coherence extinction by z=12", true},
};

}  // namespace

int criterion_count() { return static_cast<int>(std::size(kCriteria)); }

std::vector<CriterionResult> run_acceptance(int only_id, unsigned threads) {
    std::vector<CriterionResult> results;
    for (const auto& spec : kCriteria) {
        if (only_id != 0 && spec.id != only_id) continue;
        Check check;
        const auto t0 = std::chrono::steady_clock::now();
        switch (spec.id) {
            case 1: crit_single_steady_uniform(check, nullptr); break;
            case 2: crit_two_boson_steady_values(check, nullptr); break;
            case 3: crit_steady_universality(check, nullptr); break;
            case 4: crit_incoherence_preservation(check, nullptr); break;
            case 5: crit_frozen_coupling_decay_rates(check, nullptr); break;
            case 6: crit_trajectory_master_equivalence(check, threads); break;
            case 7: crit_fermion_sector(check, nullptr); break;
            case 8: crit_dephasing_strength_ordering(check, nullptr); break;
            case 9: crit_noiseless_regression(check, nullptr); break;
            case 10: crit_conservation_suite(check, threads); break;
            case 11: crit_single_coherence_extinction(check, nullptr); break;
        }
        CriterionResult r;
        r.id = spec.id;
        r.name = spec.name;
        r.expected_to_fail = spec.expected_to_fail;
        r.passed = check.ok;
        r.detail = check.detail.str();
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results.push_back(std::move(r));
    }
    return results;
}

void print_acceptance_table(std::ostream& os, const std::vector<CriterionResult>& results) {
    int passed = 0;
    for (const auto& r : results) {
        os << (r.passed ? "PASS" : "FAIL") << "  C" << std::setw(2) << std::setfill('0') << r.id
           << std::setfill(' ') << "  " << r.name << "  (" << std::fixed << std::setprecision(2)
           << r.seconds << " s)";
        os.unsetf(std::ios::fixed);
        if (!r.passed && r.expected_to_fail) {
            os << "  [expected: reference values diverge from the exact dynamics; see notes]";
        }
        os << '\n' << r.detail;
        if (r.passed) ++passed;
    }
    os << passed << "/" << results.size() << " criteria passed\n";
}

}  // namespace dephnet
