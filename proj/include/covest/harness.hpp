#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "covest/channel.hpp"
#include "covest/hermitian.hpp"
#include "covest/ista.hpp"
#include "covest/measurement.hpp"

namespace covest {

enum class EstimatorKind { exact_ml, approx_ml, max_power };

std::string_view to_string(EstimatorKind k);
/// Accepts "exact", "approx", "maxpower" and the long forms "exact-ml",
/// "approx-ml", "max-power".
std::optional<EstimatorKind> parse_estimator(std::string_view s);

struct ExperimentPlan {
    SceneSamplerConfig scene;
    std::vector<int> measurement_counts{60};
    double gamma = 10.0;  // linear per-antenna SNR
    int diversity = 4;
    int trials = 1000;
    std::vector<EstimatorKind> estimators{EstimatorKind::exact_ml};
    std::vector<double> mu_values{0.0};
    std::uint64_t seed = 1;
    EstimatorConfig solver;  // mu is taken from mu_values

    void validate() const;
};

struct TrialReport {
    int trial = 0;
    int measurements = 0;
    EstimatorKind estimator = EstimatorKind::exact_ml;
    double mu = 0.0;
    double loss_db = 0.0;  // +inf when the beam is orthogonal to the channel
    int iterations = 0;
    std::optional<Termination> terminated_by;
    double wall_seconds = 0.0;
    bool failed = false;
    std::string error;
};

/// 10 log10(lambda_max(Q) / w^H Q w) for a unit-norm beam w. Returns +inf when
/// w^H Q w <= 1e-15 lambda_max.
double beamforming_loss(const HermitianMatrix& q_true, const ComplexVector& w_hat);

/// Normalized probe with the largest observed power (lowest index on ties).
ComplexVector max_power_beam(const MeasurementSet& m);

/// One Monte Carlo trial. Scene, probes and powers depend only on
/// (plan.seed, trial, L), so every estimator and mu sees the same data.
TrialReport run_trial(const ExperimentPlan& plan, int trial, int measurements,
                      EstimatorKind estimator, double mu);

struct SweepRow {
    int measurements = 0;
    EstimatorKind estimator = EstimatorKind::exact_ml;
    double mu = 0.0;
    double mean_loss_db = 0.0;
    double stderr_db = 0.0;
    int trials = 0;  // finite losses entering the mean
    double mean_iters = 0.0;
    int excluded = 0;  // orthogonal-beam (+inf) trials
    int failed = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<TrialReport> reports;  // ordered like rows, then by trial index
};

/// Runs every (L, estimator, mu, trial) combination across `workers` OpenMP
/// threads (0: runtime default) and reduces in a fixed order.
SweepResult run_sweep(const ExperimentPlan& plan, int workers = 0);

/// Serial reference for run_sweep.
SweepResult run_sweep_serial(const ExperimentPlan& plan);

/// Aggregates reports that share (L, estimator, mu); input order is kept.
std::vector<SweepRow> summarize(const std::vector<TrialReport>& reports);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_trials_jsonl(std::ostream& os, const std::vector<TrialReport>& reports);

}  // namespace covest
