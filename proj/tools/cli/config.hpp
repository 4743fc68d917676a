#pragma once

#include "json_io.hpp"

#include <string>

namespace resurge::cli {

inline constexpr const char* kConfigEnv = "RESURGE_CONFIG";

struct Config {
    unsigned precision_bits = 256;
    double tol = 1e-20;            // Laplace sums
    double fatou_tol = 1e-30;      // Fatou coordinates
    double periodicity_tol = 1e-10;
    double convergence = 2e-3;     // Richardson stages
    int order = 40;                // truncation of solver output
    int henon_order = 200;         // coefficients fed to the Henon constants
    int richardson_depth = 8;
    int quad_nodes = 24;
    long budget = 2000000;         // integrand evaluations per Laplace sum
    int fourier_samples = 256;
    std::string format = "json";
    int threads = 1;

    Json to_json() const;
    // Throws std::invalid_argument on unknown keys, wrong types or non-positive values.
    void merge(const Json& j);
    void validate() const;
};

// Reads the file named by RESURGE_CONFIG (if set) and returns the merged config.
Config load_config(const std::string& explicit_path = "");

}  // namespace resurge::cli
