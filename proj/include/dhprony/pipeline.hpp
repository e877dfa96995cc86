///
/// \file pipeline.hpp
///
/// End-to-end decimated homotopy solver and the experiment harness that
/// compares it against ESPRIT and classical Prony on synthetic data.
///
#ifndef DHPRONY_PIPELINE_HPP
#define DHPRONY_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <dhprony/esprit.hpp>
#include <dhprony/model.hpp>
#include <dhprony/polysolve.hpp>

namespace dhprony
{

enum class PruningStrategy
{
    Exhaustive,
    Prefilter,
    PrefilterInit
};

struct SolveOptions
{
    PruningStrategy strategy = PruningStrategy::Prefilter;
    std::optional<std::vector<Complex>> z_init;
    /// Init-filter radius; unset means 1/N.
    std::optional<double> eta;
    /// Upper residual index; negative means d - 1.
    int k_max = -1;
    TrackOptions track;
    std::optional<int> p;
    /// Measurement noise level used for the kappa diagnostic (0: machine epsilon).
    double noise_level = 0.0;

    void validate() const;
};

struct SolveDiagnostics
{
    int p = 1;
    int path_count = 0;
    int converged = 0;
    int diverged = 0;
    int failed = 0;
    int solution_count = 0;
    int candidate_count = 0;
    double selected_residual = 0.0;
    /// Largest kappa_i at the selected powered nodes (NaN if unavailable).
    double kappa = 0.0;
    double t_construct_ms = 0.0;
    double t_solve_ms = 0.0;
    double t_select_ms = 0.0;
};

struct SolveResult
{
    PronyParameters params;
    SolveDiagnostics diagnostics;
};

SolveResult decimated_homotopy(const MeasurementSequence& meas, const MultiplicityVector& mult,
                               const SolveOptions& opts = {});

enum class Method
{
    DH,
    ESPRIT,
    Prony
};

std::string to_string(Method m);
Method method_from_string(const std::string& name);
std::string to_string(PruningStrategy s);
PruningStrategy strategy_from_string(const std::string& name);
std::string to_string(NoiseKind k);
NoiseKind noise_kind_from_string(const std::string& name);

struct ExperimentConfig
{
    std::vector<int> multiplicities{2, 2};
    double delta_min = 0.01;
    double delta_max = 0.01;
    double coef_min = 0.5;
    double coef_max = 1.5;
    std::uint64_t seed = 1;
    int N = 1000;
    /// Empty means {floor(N/R)}.
    std::vector<int> p_values;
    NoiseKind noise_kind = NoiseKind::BoundedUniform;
    double noise_level = 0.0;
    int trials = 1;
    std::vector<Method> methods{Method::DH};
    PruningStrategy strategy = PruningStrategy::PrefilterInit;
    /// Angular offset applied to the true nodes to form z_init.
    double init_offset = 0.0;
    /// 0 means 1/N.
    double eta = 0.0;
    int esprit_window = 0;
    std::string output_dir;

    void validate() const;
    std::vector<int> effective_p_values() const;
};

struct TrialRecord
{
    int trial = 0;
    std::uint64_t seed = 0;
    Method method = Method::DH;
    int N = 0;
    double delta = 0.0;
    int p = 1;
    bool ok = false;
    std::string error;
    /// NaN when the method failed.
    double node_err = 0.0;
    double cn_full = 0.0;
    double cn_dec = 0.0;
    double kappa = 0.0;
    double t_construct_ms = 0.0;
    double t_solve_ms = 0.0;
    double t_select_ms = 0.0;
    int n_solutions = 0;
    std::vector<Complex> truth;
    std::vector<Complex> estimate;
};

struct ExperimentReport
{
    ExperimentConfig config;
    std::vector<TrialRecord> records;
};

/// Seed of trial `index` derived from the master seed.
std::uint64_t trial_seed(std::uint64_t master, int index);

/// Nodes spaced delta apart around a uniform random center; coefficients
/// with uniform argument and magnitude in [coef_min, coef_max].
PronyParameters generate_instance(const MultiplicityVector& mult, double delta, double coef_min,
                                  double coef_max, std::uint64_t seed);

ExperimentReport run_experiment(const ExperimentConfig& config);

/// Writes results.csv, report.json and curves.csv into `dir`.
void emit_report(const ExperimentReport& report, const std::filesystem::path& dir);

std::string results_csv(const ExperimentReport& report);
std::string curves_csv(const ExperimentReport& report);

} // namespace dhprony

#endif
