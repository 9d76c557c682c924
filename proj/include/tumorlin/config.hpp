#ifndef TUMORLIN_CONFIG_HPP
#define TUMORLIN_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tumorlin/kinetics.hpp"

namespace tumorlin {

// Run configuration, read either from JSON ({"n":3,"lambda":1,...}) or from
// key=value lines (# comments allowed; gammas/ks as comma lists). Unknown
// keys are an error so typos do not silently fall back to defaults.
struct RunConfig {
    KineticParams params;
    int grid_n = 4096;
    int k_max = 12;
    std::vector<double> gammas = {5.0, 50.0, 500.0};
    double T = 20.0;
    double dt_cfl = 0.5;
    int trials = 3;
    double alpha = 2.0;
    double beta = 2.0;
    std::string output_dir = "out";
    std::uint64_t seed = 12345;
    double lambda_target = 0.01;
    double gamma_lo = 1.0;
    double gamma_hi = 1000.0;
    int threads = 1;
};

// throws std::runtime_error with file/line or key diagnostics
RunConfig load_config(const std::string& path);

} // namespace tumorlin

#endif
