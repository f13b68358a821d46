#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "landau/atlas.hpp"
#include "landau/density.hpp"
#include "landau/frame.hpp"

namespace landau {

enum class Mode { Sampling, Interpolation };
const char* to_string(Mode m);

struct Scenario {
    std::string name;
    DiscreteSet set;
    Spectrum spectrum;
    Mode mode = Mode::Sampling;
    std::vector<double> windows{8, 16, 32, 64, 128};
    double epsilon = 0.25;
    std::uint64_t seed = 1;
    std::size_t grid_budget = 4'000'000;
    std::vector<double> tile_width;  // replay: starting tile width per RealLine factor
    double l_radius = 0;             // replay: L = [-l, l]; 0 picks two quasi-lattice steps
    ExpansionSchedule hap_schedule;  // replay: empty uses 0 and doubling from 1 to 128
};

enum class NecessityVerdict { Consistent, Violated, Inconclusive };
const char* to_string(NecessityVerdict v);

struct TrendRow {
    double window = 0;
    double bound = 0;  // A for sampling, a for interpolation
    std::size_t points = 0;
};

struct NecessityReport {
    std::string scenario;
    Mode mode = Mode::Sampling;
    double nyquist = 0;
    DensityEstimate beurling;
    UniformDensity uniform;
    ComparisonVerdict comparison;
    std::vector<TrendRow> trend;
    bool decaying = false;
    bool bounded_below = false;
    bool density_meets_nyquist = false;  // D- >= nyquist (sampling) or D+ <= nyquist (interpolation)
    NecessityVerdict verdict = NecessityVerdict::Inconclusive;
    std::string note;
};

struct NecessityOptions {
    double density_tolerance = 0.02;
    double decay_factor = 10;
    double decay_floor = 0.05;
};

// falls by decay_factor across the schedule and ends below decay_floor times its first value
bool is_decaying(const std::vector<TrendRow>& t, const NecessityOptions& opt = {});

NecessityReport verify_sampling_necessity(const Scenario& s, const NecessityOptions& opt = {});
NecessityReport verify_interpolation_necessity(const Scenario& s, const NecessityOptions& opt = {});

struct StageResult {
    std::string name;
    bool passed = false;
    std::string message;
    std::map<std::string, double> values;
};

struct ReplayReport {
    std::string scenario;
    std::vector<StageResult> stages;
    bool completed = false;
    bool hypothesis_failure = false;
    std::string failed_stage;
    double slack = 0;  // rhs - lhs of the final cardinality inequality
};

ReplayReport replay_proof_pipeline(const Scenario& s);

struct EigenCountRow {
    double h = 0;
    std::size_t count = 0;
    double expected = 0;  // a * h
    double residual = 0;  // count - a * h
    double envelope = 0;  // 2 log h + 4
    std::size_t nodes = 0;
};

struct EigenCountReport {
    double a = 0;
    double threshold = 0;
    std::vector<EigenCountRow> rows;
    double exponent = 0;  // slope of log max(|residual|, 1) against log h
    bool within_envelope = false;
};

EigenCountReport eigenvalue_count_experiment(double a, const std::vector<double>& windows, double threshold,
                                             const GridPolicy& policy = {});

// One seeded random instance of the trace chain on the real line.
struct RsInstance {
    std::uint64_t seed = 0;
    bool verified = false;  // the epsilon-hypothesis held for some K in the schedule
    double epsilon = 0;
    double k_radius = -1;
    std::size_t grid_dimension = 0;
    RsRecord record;
};

RsInstance rs_random_instance(std::uint64_t seed);

struct ScenarioOutcome {
    std::string name;
    bool error = false;
    std::string message;
    std::optional<NecessityReport> report;
};

struct BatchReport {
    std::vector<ScenarioOutcome> outcomes;
    std::size_t consistent = 0, violated = 0, inconclusive = 0, errors = 0;
    int exit_status() const { return violated ? 1 : 0; }
};

BatchReport run_scenarios(const std::vector<Scenario>& batch);

// The scenarios used by the replay examples.
Scenario canonical_scenario();
Scenario two_interval_scenario();
Scenario undersampled_scenario();

}  // namespace landau
