#include "bsr/experiments.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "bsr/instance.hpp"

namespace bsr::experiments {

namespace {

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::size_t round_count(double fraction, std::size_t n) {
    return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

}  // namespace

void ExperimentConfig::validate() const {
    if (d == 0) throw std::invalid_argument("experiment config: d must be positive");
    if (n == 0) throw std::invalid_argument("experiment config: n must be positive");
    if (!(beta >= 0.0) || beta > 1.0)
        throw std::invalid_argument("experiment config: beta must lie in [0, 1]");
    if (alpha_grid.empty())
        throw std::invalid_argument("experiment config: alpha_grid must be non-empty");
    for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
        if (!(alpha_grid[i] > 0.0) || alpha_grid[i] > 1.0)
            throw std::invalid_argument("experiment config: alpha_grid entries must lie in (0, 1]");
        if (i > 0 && alpha_grid[i] <= alpha_grid[i - 1])
            throw std::invalid_argument(
                "experiment config: alpha_grid must be strictly increasing");
    }
    if (trials == 0) throw std::invalid_argument("experiment config: trials must be positive");
    if (!(rec_tol > 0.0)) throw std::invalid_argument("experiment config: rec_tol must be positive");
    if (!(magnitude_low > 0.0) || magnitude_high < magnitude_low)
        throw std::invalid_argument(
            "experiment config: magnitudes need 0 < magnitude_low <= magnitude_high");
    if (round_count(alpha_grid.front(), n) == 0)
        throw std::invalid_argument(
            "experiment config: the smallest alpha rounds to zero measurement blocks");
}

PhaseResult run_phase(const ExperimentConfig& config) {
    config.validate();

    const std::size_t n_cells = config.alpha_grid.size();
    const std::size_t n_tasks = n_cells * config.trials;
    const std::size_t k = round_count(config.beta, config.n);

    // One slot per (cell, trial); workers write disjoint slots so the
    // aggregate is independent of scheduling and worker count.
    struct TaskOutcome {
        char success = 0;
        char nonconverged = 0;
    };
    std::vector<TaskOutcome> outcomes(n_tasks);
    std::atomic<std::size_t> next_task{0};
    std::mutex log_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t t = next_task.fetch_add(1);
            if (t >= n_tasks) return;
            const std::size_t cell = t / config.trials;
            const std::size_t trial = t % config.trials;
            BlockStructure st;
            st.n = config.n;
            st.d = config.d;
            st.m = std::min(round_count(config.alpha_grid[cell], config.n), config.n);
            st.k = k;
            const RngSpec spec{config.master_seed, derive_stream(cell, trial)};
            try {
                const ProblemInstance inst =
                    generate_instance(st, config.magnitude_low, config.magnitude_high, spec);
                const recovery::RecoveryResult res =
                    recovery::solve_group_bp(inst.A, inst.y, config.d, config.solve);
                if (!res.converged) {
                    outcomes[t].nonconverged = 1;
                    std::lock_guard<std::mutex> lock(log_mutex);
                    std::cerr << "phase: solve hit the iteration cap (alpha="
                              << config.alpha_grid[cell] << ", trial=" << trial << ")\n";
                } else if (recovery::check_recovery(res, inst.x_true, config.rec_tol)) {
                    outcomes[t].success = 1;
                }
            } catch (const std::exception& ex) {
                outcomes[t].nonconverged = 1;
                std::lock_guard<std::mutex> lock(log_mutex);
                std::cerr << "phase: trial failed (alpha=" << config.alpha_grid[cell]
                          << ", trial=" << trial << "): " << ex.what() << "\n";
            }
        }
    };

    std::size_t n_jobs = config.jobs;
    if (n_jobs == 0) n_jobs = std::max(1u, std::thread::hardware_concurrency());
    n_jobs = std::min(n_jobs, n_tasks);
    if (n_jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_jobs);
        for (std::size_t j = 0; j < n_jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    PhaseResult result;
    result.config = config;
    result.cells.resize(n_cells);
    for (std::size_t c = 0; c < n_cells; ++c) {
        PhaseCell& cell = result.cells[c];
        cell.alpha = config.alpha_grid[c];
        cell.m = std::min(round_count(config.alpha_grid[c], config.n), config.n);
        cell.k = k;
        cell.trials = config.trials;
        for (std::size_t trial = 0; trial < config.trials; ++trial) {
            const TaskOutcome& o = outcomes[c * config.trials + trial];
            cell.successes += o.success;
            cell.nonconverged += o.nonconverged;
        }
        cell.rate = static_cast<double>(cell.successes) / static_cast<double>(cell.trials);
    }
    return result;
}

double estimate_crossing(const std::vector<PhaseCell>& cells) {
    if (cells.empty()) throw std::runtime_error("crossing: no cells");
    std::size_t first_at_or_above = cells.size();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0 && cells[i].alpha <= cells[i - 1].alpha)
            throw std::runtime_error("crossing: cells must be sorted by increasing alpha");
        if (first_at_or_above == cells.size() && cells[i].rate >= 0.5) first_at_or_above = i;
    }
    if (first_at_or_above == cells.size())
        throw std::runtime_error(
            "crossing: the rate never reaches 1/2; extend the alpha grid upward");
    const PhaseCell& hi = cells[first_at_or_above];
    if (hi.rate == 0.5) return hi.alpha;
    if (first_at_or_above == 0)
        throw std::runtime_error(
            "crossing: the rate already exceeds 1/2 at the smallest alpha; extend the grid "
            "downward");
    const PhaseCell& lo = cells[first_at_or_above - 1];
    return lo.alpha + (0.5 - lo.rate) * (hi.alpha - lo.alpha) / (hi.rate - lo.rate);
}

std::string phase_to_csv(const PhaseResult& result) {
    std::string out = "d,n,m,k,alpha,beta,trials,successes,rate,nonconverged\n";
    for (const PhaseCell& cell : result.cells) {
        out += std::to_string(result.config.d);
        out += ',';
        out += std::to_string(result.config.n);
        out += ',';
        out += std::to_string(cell.m);
        out += ',';
        out += std::to_string(cell.k);
        out += ',';
        out += format17(cell.alpha);
        out += ',';
        out += format17(result.config.beta);
        out += ',';
        out += std::to_string(cell.trials);
        out += ',';
        out += std::to_string(cell.successes);
        out += ',';
        out += format17(cell.rate);
        out += ',';
        out += std::to_string(cell.nonconverged);
        out += '\n';
    }
    return out;
}

std::string phase_metadata_document(const ExperimentConfig& config) {
    nlohmann::json doc;
    doc["format"] = "bsr-phase-meta/1";
    doc["library_version"] = kLibraryVersion;
    doc["rng_algorithm"] = rng_algorithm_name();
    doc["config"] = {{"d", config.d},
                     {"n", config.n},
                     {"beta", config.beta},
                     {"alpha_grid", config.alpha_grid},
                     {"trials", config.trials},
                     {"master_seed", config.master_seed},
                     {"rec_tol", config.rec_tol},
                     {"magnitude_low", config.magnitude_low},
                     {"magnitude_high", config.magnitude_high},
                     // jobs is deliberately absent: scheduling never alters results
                     {"solve",
                      {{"feas_tol", config.solve.feas_tol},
                       {"obj_tol", config.solve.obj_tol},
                       {"max_iters", config.solve.max_iters},
                       {"rho", config.solve.rho}}}};
    return doc.dump(2);
}

}  // namespace bsr::experiments
