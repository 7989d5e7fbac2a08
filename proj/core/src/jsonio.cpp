#include "dephnet/jsonio.hpp"

#include "dephnet/analysis.hpp"
#include "json_emit.hpp"

#include <json.hpp>

#include <cmath>
#include <ostream>
#include <sstream>

namespace dephnet {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_double(double value) {
    if (!std::isfinite(value)) throw std::runtime_error("format_double: non-finite value");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

// ---------------------------------------------------------------------------
// NetworkSpec
// ---------------------------------------------------------------------------

namespace {

Eigen::VectorXd vector_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array");
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError(std::string(what) + " entries must be numbers");
        v[i] = j[i].get<double>();
    }
    return v;
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.empty()) throw ConfigError(std::string(what) + " must be a nested array");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) {
            throw ConfigError(std::string(what) + " must be rectangular");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[r][c].is_number()) throw ConfigError(std::string(what) + " entries must be numbers");
            m(r, c) = j[r][c].get<double>();
        }
    }
    return m;
}

}  // namespace

NetworkSpec network_from_json_internal(const json& j) {
    if (!j.is_object()) throw ConfigError("network must be an object");
    NetworkSpec spec;
    if (!j.contains("num_sites") || !j["num_sites"].is_number_integer()) {
        throw ConfigError("network.num_sites must be an integer");
    }
    spec.num_sites = j["num_sites"].get<int>();
    if (!j.contains("beta_mean")) throw ConfigError("network.beta_mean missing");
    spec.beta_mean = vector_from_json(j["beta_mean"], "network.beta_mean");
    if (!j.contains("kappa")) throw ConfigError("network.kappa missing");
    spec.kappa = matrix_from_json(j["kappa"], "network.kappa");

    const bool has_gamma = j.contains("gamma");
    const bool has_sigma = j.contains("sigma") || j.contains("correlation_length");
    if (has_gamma == has_sigma) {
        throw ConfigError("network requires exactly one of gamma or {sigma, correlation_length}");
    }
    if (has_gamma) {
        spec.gamma = vector_from_json(j["gamma"], "network.gamma");
    } else {
        if (!j.contains("sigma") || !j.contains("correlation_length")) {
            throw ConfigError("network calibration requires both sigma and correlation_length");
        }
        NoiseCalibration calib;
        calib.sigma = vector_from_json(j["sigma"], "network.sigma");
        if (!j["correlation_length"].is_number()) {
            throw ConfigError("network.correlation_length must be a number");
        }
        calib.correlation_length = j["correlation_length"].get<double>();
        spec.calibration = calib;
        spec.gamma = calibrate_dephasing(calib);
    }
    auto violations = validate(spec);
    if (!violations.empty()) {
        std::string msg = "invalid network:";
        for (const auto& v : violations) msg += " [" + v + "]";
        throw ConfigError(msg);
    }
    return spec;
}

NetworkSpec network_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("network JSON parse error: ") + e.what());
    }
    return network_from_json_internal(j);
}

ordered_json network_to_json_internal(const NetworkSpec& spec) {
    ordered_json j;
    j["num_sites"] = spec.num_sites;
    j["beta_mean"] = ordered_json::array();
    for (int i = 0; i < spec.num_sites; ++i) j["beta_mean"].push_back(spec.beta_mean[i]);
    j["kappa"] = ordered_json::array();
    for (int r = 0; r < spec.num_sites; ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < spec.num_sites; ++c) row.push_back(spec.kappa(r, c));
        j["kappa"].push_back(row);
    }
    if (spec.calibration) {
        j["sigma"] = ordered_json::array();
        for (int i = 0; i < spec.num_sites; ++i) j["sigma"].push_back(spec.calibration->sigma[i]);
        j["correlation_length"] = spec.calibration->correlation_length;
    } else {
        j["gamma"] = ordered_json::array();
        for (int i = 0; i < spec.num_sites; ++i) j["gamma"].push_back(spec.gamma[i]);
    }
    return j;
}

std::string network_to_json_text(const NetworkSpec& spec) {
    return emit_json(network_to_json_internal(spec));
}

// ---------------------------------------------------------------------------
// Records and results
// ---------------------------------------------------------------------------

namespace {

ordered_json flatten_complex(const Eigen::MatrixXcd& m) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            a.push_back(m(r, c).real());
            a.push_back(m(r, c).imag());
        }
    }
    return a;
}

ordered_json flatten_real(const Eigen::MatrixXd& m) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) a.push_back(m(r, c));
    }
    return a;
}

const char* order_name(MatrixOrder order) {
    return order == MatrixOrder::single ? "single" : "two";
}

const char* statistics_name(ExchangeStatistics s) {
    switch (s) {
        case ExchangeStatistics::boson: return "boson";
        case ExchangeStatistics::fermion: return "fermion";
        case ExchangeStatistics::distinguishable: return "distinguishable";
    }
    return "boson";
}

}  // namespace

std::string record_to_json_text(const EvolutionRecord& record) {
    ordered_json j;
    j["order"] = order_name(record.order);
    if (record.statistics) j["statistics"] = statistics_name(*record.statistics);
    j["num_sites"] = record.num_sites;
    j["z"] = ordered_json::array();
    for (double z : record.z) j["z"].push_back(z);
    j["matrices"] = ordered_json::array();
    for (const auto& m : record.rho) j["matrices"].push_back(flatten_complex(m));

    ordered_json obs;
    ordered_json pops = ordered_json::array();
    ordered_json offd = ordered_json::array();
    for (std::size_t k = 0; k < record.size(); ++k) {
        ordered_json p = ordered_json::array();
        const Eigen::VectorXd d = record.populations(k);
        for (Eigen::Index i = 0; i < d.size(); ++i) p.push_back(d[i]);
        pops.push_back(p);
        offd.push_back(record.max_offdiagonal(k));
    }
    obs["populations"] = pops;
    obs["max_offdiagonal"] = offd;
    if (record.order == MatrixOrder::two) {
        ordered_json exch = ordered_json::array();
        for (std::size_t k = 0; k < record.size(); ++k) {
            exch.push_back(record.max_exchange_coherence(k));
        }
        obs["max_exchange_coherence"] = exch;
    }
    j["observables"] = obs;
    return emit_json(j);
}

std::string ensemble_to_json_text(const EnsembleResult& result, MatrixOrder order,
                                  int num_sites) {
    ordered_json j;
    j["order"] = order_name(order);
    j["num_sites"] = num_sites;
    j["trajectories"] = result.trajectories;
    j["seed"] = result.seed;
    j["z"] = ordered_json::array();
    for (double z : result.z) j["z"].push_back(z);
    j["matrices"] = ordered_json::array();
    j["standard_errors_real"] = ordered_json::array();
    j["standard_errors_imag"] = ordered_json::array();
    for (const auto& mom : result.rho) {
        j["matrices"].push_back(flatten_complex(mom.mean));
        j["standard_errors_real"].push_back(flatten_real(mom.se_real));
        j["standard_errors_imag"].push_back(flatten_real(mom.se_imag));
    }
    return emit_json(j);
}

std::string steady_state_to_json_text(const SteadyStateResult& result, MatrixOrder order,
                                      int num_sites) {
    ordered_json j;
    j["order"] = order_name(order);
    j["num_sites"] = num_sites;
    j["null_space_dimension"] = result.null_space_dimension;
    j["sector_dimension"] = result.sector_dimension;
    j["residual"] = result.residual;
    j["matrix"] = flatten_complex(result.rho);
    if (order == MatrixOrder::two) {
        const Eigen::MatrixXd g2 = g2_extract(result.rho);
        j["g2"] = ordered_json::array();
        for (int p = 0; p < num_sites; ++p) {
            ordered_json row = ordered_json::array();
            for (int q = 0; q < num_sites; ++q) row.push_back(g2(p, q));
            j["g2"].push_back(row);
        }
        const auto decomp = decompose_steady_state(result.rho);
        ordered_json d;
        d["mix_weight"] = decomp.mix_weight;
        d["sep_parts"] = ordered_json::array();
        for (const auto& part : decomp.sep_parts) {
            ordered_json p;
            p["sites"] = {part.site_p + 1, part.site_q + 1};
            p["coherence"] = {{"re", part.coherence.real()}, {"im", part.coherence.imag()}};
            p["weight"] = part.weight;
            p["block_trace"] = part.block_trace;
            d["sep_parts"].push_back(p);
        }
        d["residual_norm"] = decomp.residual_norm;
        j["decomposition"] = d;
    }
    return emit_json(j);
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

void write_populations_csv(std::ostream& os, const EvolutionRecord& record) {
    os << "z,site,value\n";
    for (std::size_t k = 0; k < record.size(); ++k) {
        const Eigen::VectorXd p = record.populations(k);
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            os << format_double(record.z[k]) << ',' << (i + 1) << ',' << format_double(p[i])
               << '\n';
        }
    }
}

void write_populations_csv(std::ostream& os, const EnsembleResult& result) {
    os << "z,site,value\n";
    for (std::size_t k = 0; k < result.z.size(); ++k) {
        const auto& m = result.rho[k].mean;
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            os << format_double(result.z[k]) << ',' << (i + 1) << ','
               << format_double(m(i, i).real()) << '\n';
        }
    }
}

namespace {

void g2_rows(std::ostream& os, double z, const Eigen::MatrixXcd& rho2, int n) {
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            const int idx = pair_index(p, q, n);
            os << format_double(z) << ',' << (p + 1) << ',' << (q + 1) << ','
               << format_double(rho2(idx, idx).real()) << '\n';
        }
    }
}

}  // namespace

void write_g2_csv(std::ostream& os, const EvolutionRecord& record) {
    os << "z,p,q,value\n";
    for (std::size_t k = 0; k < record.size(); ++k) {
        g2_rows(os, record.z[k], record.rho[k], record.num_sites);
    }
}

void write_g2_csv(std::ostream& os, const EnsembleResult& result, int num_sites) {
    os << "z,p,q,value\n";
    for (std::size_t k = 0; k < result.z.size(); ++k) {
        g2_rows(os, result.z[k], result.rho[k].mean, num_sites);
    }
}

}  // namespace dephnet
