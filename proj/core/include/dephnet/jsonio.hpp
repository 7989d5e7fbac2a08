// jsonio.hpp — JSON / CSV interchange for networks, records, and results
//
// Output numbers are decimal with 17 significant digits (lossless double
// round-trip) and key order is fixed, so identical inputs produce
// byte-identical files.

#pragma once

#include "dephnet/master.hpp"
#include "dephnet/network.hpp"
#include "dephnet/record.hpp"
#include "dephnet/trajectory.hpp"

#include <iosfwd>
#include <string>

namespace dephnet {

// Raised for malformed documents; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// NetworkSpec documents
// ---------------------------------------------------------------------------
// Schema: { "num_sites": N, "beta_mean": [..], "kappa": [[..]..],
//           and exactly one of "gamma": [..]
//                           or "sigma": [..], "correlation_length": x }

NetworkSpec network_from_json_text(const std::string& text);
std::string network_to_json_text(const NetworkSpec& spec);

// ---------------------------------------------------------------------------
// Result documents
// ---------------------------------------------------------------------------

// Evolution record: z grid, row-major flattened matrices with interleaved
// re/im, and derived observables.
std::string record_to_json_text(const EvolutionRecord& record);

// Ensemble result with per-entry standard errors.
std::string ensemble_to_json_text(const EnsembleResult& result, MatrixOrder order,
                                  int num_sites);

// Steady state with null-space diagnostics (+ G2 and the exchange-block
// decomposition for two-particle states).
std::string steady_state_to_json_text(const SteadyStateResult& result, MatrixOrder order,
                                      int num_sites);

// CSV emitters. Site/pair indices are 1-based in files.
void write_populations_csv(std::ostream& os, const EvolutionRecord& record);
void write_populations_csv(std::ostream& os, const EnsembleResult& result);
void write_g2_csv(std::ostream& os, const EvolutionRecord& record);
void write_g2_csv(std::ostream& os, const EnsembleResult& result, int num_sites);

// 17-significant-digit decimal for a double (shared by all emitters).
std::string format_double(double value);

}  // namespace dephnet
