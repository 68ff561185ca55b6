#include "covest/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include <omp.h>

#include <json.hpp>

#include "covest/estimator_glm.hpp"
#include "covest/estimator_ml.hpp"
#include "covest/rng.hpp"

namespace covest {

std::string_view to_string(EstimatorKind k) {
    switch (k) {
    case EstimatorKind::exact_ml:
        return "exact-ml";
    case EstimatorKind::approx_ml:
        return "approx-ml";
    case EstimatorKind::max_power:
        return "max-power";
    }
    return "unknown";
}

std::optional<EstimatorKind> parse_estimator(std::string_view s) {
    if (s == "exact" || s == "exact-ml")
        return EstimatorKind::exact_ml;
    if (s == "approx" || s == "approx-ml")
        return EstimatorKind::approx_ml;
    if (s == "maxpower" || s == "max-power")
        return EstimatorKind::max_power;
    return std::nullopt;
}

void ExperimentPlan::validate() const {
    scene.validate();
    if (measurement_counts.empty())
        throw std::invalid_argument("plan: at least one L value is required");
    for (std::size_t i = 0; i < measurement_counts.size(); ++i) {
        if (measurement_counts[i] < 1)
            throw std::invalid_argument("plan: L values must be positive");
        for (std::size_t j = 0; j < i; ++j)
            if (measurement_counts[i] == measurement_counts[j])
                throw std::invalid_argument("plan: L values must be distinct");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("plan: gamma must be positive");
    if (diversity < 1)
        throw std::invalid_argument("plan: diversity must be at least 1");
    if (trials < 1)
        throw std::invalid_argument("plan: trials must be at least 1");
    if (estimators.empty())
        throw std::invalid_argument("plan: at least one estimator is required");
    if (mu_values.empty())
        throw std::invalid_argument("plan: at least one mu value is required");
    for (double mu : mu_values)
        if (!(mu >= 0.0) || !std::isfinite(mu))
            throw std::invalid_argument("plan: mu values must be nonnegative");
    solver.validate();
}

double beamforming_loss(const HermitianMatrix& q_true, const ComplexVector& w_hat) {
    if (w_hat.size() != q_true.dim())
        throw DimensionMismatch("beamforming_loss: beam length does not match N");
    if (std::abs(w_hat.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("beamforming_loss: beam must have unit norm");
    const double lambda_max = max_eigenvector(q_true).value;
    if (!(lambda_max > 0.0))
        throw DomainError("beamforming_loss: covariance must be nonzero PSD");
    const double gain = q_true.quadratic_form(w_hat);
    if (gain <= 1e-15 * lambda_max)
        return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(lambda_max / gain);
}

ComplexVector max_power_beam(const MeasurementSet& m) {
    if (m.count() < 1)
        throw std::invalid_argument("max_power_beam: no measurements");
    Index best = 0;
    for (Index l = 1; l < m.count(); ++l)
        if (m.powers(l) > m.powers(best))
            best = l;
    return m.directions.col(best).normalized();
}

TrialReport run_trial(const ExperimentPlan& plan, int trial, int measurements,
                      EstimatorKind estimator, double mu) {
    TrialReport r;
    r.trial = trial;
    r.measurements = measurements;
    r.estimator = estimator;
    r.mu = mu;

    const auto start = std::chrono::steady_clock::now();
    try {
        const std::uint64_t seed = trial_seed(plan.seed, static_cast<std::uint64_t>(trial));
        const ChannelScene scene = sample_scene(stream_seed(seed, Stream::scene), plan.scene);
        const HermitianMatrix q_true = scene_covariance(scene);
        DirectionMatrix u = sample_directions(plan.scene.geometry, measurements,
                                              stream_seed(seed, Stream::directions));
        const MeasurementSet m = sample_powers(q_true, std::move(u), plan.gamma, plan.diversity,
                                               stream_seed(seed, Stream::powers));

        EstimatorConfig cfg = plan.solver;
        cfg.mu = mu;
        ComplexVector w;
        switch (estimator) {
        case EstimatorKind::exact_ml: {
            auto [q_hat, trace] = solve_exact_ml(m, cfg);
            w = max_eigenvector(q_hat).vector;
            r.iterations = trace.iterations;
            r.terminated_by = trace.terminated_by;
            break;
        }
        case EstimatorKind::approx_ml: {
            auto [coeffs, trace] = solve_approx_ml(m, cfg);
            w = max_eigenvector(reconstruct_q(coeffs, m.directions, m.dim())).vector;
            r.iterations = trace.iterations;
            r.terminated_by = trace.terminated_by;
            break;
        }
        case EstimatorKind::max_power:
            w = max_power_beam(m);
            break;
        }
        r.loss_db = beamforming_loss(q_true, w);
    } catch (const std::exception& e) {
        r.failed = true;
        r.error = e.what();
        r.loss_db = std::numeric_limits<double>::quiet_NaN();
    }
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

namespace {

struct Task {
    int measurements;
    EstimatorKind estimator;
    double mu;
    int trial;
};

// (L, estimator, mu) blocks in plan order, trials ascending inside a block.
std::vector<Task> enumerate_tasks(const ExperimentPlan& plan) {
    std::vector<Task> tasks;
    for (int l : plan.measurement_counts) {
        for (EstimatorKind est : plan.estimators) {
            // the max-power selector ignores mu
            const std::vector<double> mus =
                est == EstimatorKind::max_power ? std::vector<double>{0.0} : plan.mu_values;
            for (double mu : mus)
                for (int t = 0; t < plan.trials; ++t)
                    tasks.push_back({l, est, mu, t});
        }
    }
    return tasks;
}

}  // namespace

SweepResult run_sweep(const ExperimentPlan& plan, int workers) {
    plan.validate();
    const std::vector<Task> tasks = enumerate_tasks(plan);
    std::vector<TrialReport> reports(tasks.size());
    const int threads = workers > 0 ? workers : omp_get_max_threads();
    const long count = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long i = 0; i < count; ++i) {
        const Task& t = tasks[static_cast<std::size_t>(i)];
        reports[static_cast<std::size_t>(i)] = run_trial(plan, t.trial, t.measurements, t.estimator, t.mu);
    }
    SweepResult out;
    out.rows = summarize(reports);
    out.reports = std::move(reports);
    return out;
}

SweepResult run_sweep_serial(const ExperimentPlan& plan) {
    plan.validate();
    SweepResult out;
    for (const Task& t : enumerate_tasks(plan))
        out.reports.push_back(run_trial(plan, t.trial, t.measurements, t.estimator, t.mu));
    out.rows = summarize(out.reports);
    return out;
}

std::vector<SweepRow> summarize(const std::vector<TrialReport>& reports) {
    std::vector<SweepRow> rows;
    std::size_t i = 0;
    while (i < reports.size()) {
        const auto key = std::tie(reports[i].measurements, reports[i].estimator, reports[i].mu);
        SweepRow row;
        row.measurements = reports[i].measurements;
        row.estimator = reports[i].estimator;
        row.mu = reports[i].mu;
        double sum = 0.0;
        double sum_sq = 0.0;
        double iters = 0.0;
        int attempted = 0;
        for (; i < reports.size() &&
               std::tie(reports[i].measurements, reports[i].estimator, reports[i].mu) == key;
             ++i) {
            const TrialReport& r = reports[i];
            if (r.failed) {
                ++row.failed;
                continue;
            }
            ++attempted;
            iters += r.iterations;
            if (!std::isfinite(r.loss_db)) {
                ++row.excluded;
                continue;
            }
            ++row.trials;
            sum += r.loss_db;
            sum_sq += r.loss_db * r.loss_db;
        }
        if (row.trials > 0)
            row.mean_loss_db = sum / row.trials;
        if (row.trials > 1) {
            const double var =
                std::max(0.0, (sum_sq - row.trials * row.mean_loss_db * row.mean_loss_db) /
                                  (row.trials - 1));
            row.stderr_db = std::sqrt(var / row.trials);
        }
        if (attempted > 0)
            row.mean_iters = iters / attempted;
        rows.push_back(row);
    }
    return rows;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "L,estimator,mu,mean_loss_db,stderr_db,trials,mean_iters,excluded,failed\n";
    for (const auto& r : rows) {
        os << r.measurements << ',' << to_string(r.estimator) << ',' << fmt(r.mu) << ','
           << fmt(r.mean_loss_db) << ',' << fmt(r.stderr_db) << ',' << r.trials << ','
           << fmt(r.mean_iters) << ',' << r.excluded << ',' << r.failed << '\n';
    }
}

void write_trials_jsonl(std::ostream& os, const std::vector<TrialReport>& reports) {
    for (const auto& r : reports) {
        nlohmann::json j;
        j["trial"] = r.trial;
        j["L"] = r.measurements;
        j["estimator"] = to_string(r.estimator);
        j["mu"] = r.mu;
        if (std::isfinite(r.loss_db))
            j["loss_db"] = r.loss_db;
        else
            j["loss_db"] = nullptr;
        j["iterations"] = r.iterations;
        if (r.terminated_by)
            j["terminated_by"] = to_string(*r.terminated_by);
        j["wall_seconds"] = r.wall_seconds;
        j["failed"] = r.failed;
        if (r.failed)
            j["error"] = r.error;
        os << j.dump() << '\n';
    }
}

}  // namespace covest
