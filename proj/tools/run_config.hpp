#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "choquard/ground_state.hpp"
#include "choquard/nonlinearity.hpp"
#include "choquard/potential.hpp"
#include "choquard/riesz.hpp"
#include "choquard/semiclassical.hpp"
#include "json.hpp"

namespace choquard::cli {

/// Bad key, value or combination; maps to exit status 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written; maps to exit status 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridConfig {
    int n = 64;
    double L = 16.0;
};

struct NonlinearityConfig {
    std::string name = "power";
    double p = 2.5;
};

struct PotentialConfig {
    std::string name = "double_well";
    std::map<std::string, double> params;  // every parameter of the preset, defaults filled
};

struct ModelConfig {
    double alpha = 2.0;
    NonlinearityConfig nonlinearity;
    PotentialConfig potential;
    std::string zero_mode = "image_calibrated";
    double kappa = 1.0;
};

struct SolverConfig {
    std::string method = "source_iteration";
    double grad_tol = 1e-6;
    double pohozaev_tol = 1e-3;
    int max_iter = 5000;
    double tau = 0.5;
    double newton_tol = 1e-5;
    int max_newton = 60;
    int krylov_dim = 40;
    int krylov_restarts = 4;
    std::uint64_t seed = 1;
};

struct AnsatzConfig {
    double delta_fraction = 0.1;
    double beta_fraction = 0.9;
    double d_fraction = 0.2;
};

struct TGridConfig {
    double start = 0.02;
    double stop = 3.0;
    double step = 0.02;
};

struct RunSection {
    double a = 1.0;
    std::vector<double> a_list{0.5, 1.0, 2.0};
    double epsilon = 0.25;
    std::vector<double> eps_list{0.5, 0.35, 0.25};
    TGridConfig t_grid;
    int well = -1;  // path-profile: -1 selects every well
};

struct RunConfig {
    GridConfig grid;
    ModelConfig model;
    double mu = 2.0;
    SolverConfig solver;
    AnsatzConfig ansatz;
    RunSection run;
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw ConfigError with the
/// key path. A "manifest" block written by a previous run is accepted and ignored.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config(const std::filesystem::path& path);

/// Fully resolved config; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const RunConfig& cfg);

/// Preset parameter names and defaults.
const std::map<std::string, double>& potential_defaults(const std::string& name);

Nonlinearity make_nonlinearity(const RunConfig& cfg);
PotentialSpec make_potential(const RunConfig& cfg);
RieszOperator make_riesz(const RunConfig& cfg);
LimitSolverOptions limit_options(const RunConfig& cfg);
AnsatzOptions ansatz_options(const RunConfig& cfg);
PenalizedSolverOptions penalized_options(const RunConfig& cfg);
std::vector<double> t_values(const TGridConfig& t);

/// Closest candidate within edit distance 2, or empty.
std::string suggest(const std::string& key, const std::vector<std::string>& candidates);

}  // namespace choquard::cli
