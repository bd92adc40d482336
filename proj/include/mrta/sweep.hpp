#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mrta/core.hpp"
#include "mrta/flatten.hpp"
#include "mrta/instance_gen.hpp"
#include "mrta/json_io.hpp"
#include "mrta/rng.hpp"
#include "mrta/solvers.hpp"

namespace mrta {

inline const std::vector<std::string>& solver_names() {
    static const std::vector<std::string> names = {"flat_max_util", "flat_rc", "flat_rca",
                                                   "random_config"};
    return names;
}

struct SolveOptions {
    std::uint64_t random_seed = 0;          // stream for random_config
    std::uint64_t oracle_budget = 10'000'000;
};

/// Runs one named solver on one instance. Accepts the four heuristics plus
/// "exact"; anything else is a usage error.
inline SolverResult run_single(const Problem& problem, const std::string& solver,
                               const SolveOptions& options = {}) {
    if (solver == "random_config") return solve_random_config(problem, options.random_seed);

    const FlatProblem flat = flatten(problem);
    if (solver == "flat_max_util") return solve_flat_max_util(flat);
    if (solver == "flat_rc") return solve_flat_rc(flat);
    if (solver == "flat_rca") return solve_flat_rca(flat);
    if (solver == "exact") {
        detail::StopWatch timer;
        SolverResult result;
        result.solution = solve_exact(flat, options.oracle_budget);
        result.elapsed_s = timer.seconds();
        return result;
    }
    throw std::invalid_argument("unknown solver: " + solver);
}

struct SweepSpec {
    enum class Param { NumRobots, NumTasks, MaxConfigsPerTask };

    Param swept = Param::NumRobots;
    std::vector<int> values;
    int runs_per_point = 1000;
    GenParams base;
    std::vector<std::string> solvers = solver_names();
    bool oracle = false;   // also compute the exact optimum where tractable
    bool timing = true;    // false: report 0s instead of wall time, making CSV bytes reproducible
    std::size_t oracle_assignment_limit = 2000;
    std::uint64_t oracle_budget = 10'000'000;

    void validate() const {
        if (values.empty()) throw std::invalid_argument("sweep: values must be non-empty");
        if (!std::is_sorted(values.begin(), values.end()) ||
            std::adjacent_find(values.begin(), values.end()) != values.end())
            throw std::invalid_argument("sweep: values must be strictly ascending");
        for (int v : values)
            if (v < 1) throw std::invalid_argument("sweep: values must be >= 1");
        if (runs_per_point < 1) throw std::invalid_argument("sweep: runs_per_point must be >= 1");
        if (solvers.empty()) throw std::invalid_argument("sweep: no solvers selected");
        for (const auto& s : solvers)
            if (std::find(solver_names().begin(), solver_names().end(), s) == solver_names().end())
                throw std::invalid_argument("sweep: unknown solver " + s);
    }
};

inline const char* param_name(SweepSpec::Param p) {
    switch (p) {
        case SweepSpec::Param::NumRobots: return "num_robots";
        case SweepSpec::Param::NumTasks: return "num_tasks";
        case SweepSpec::Param::MaxConfigsPerTask: return "max_configs_per_task";
    }
    return "";
}

inline SweepSpec::Param param_from_name(const std::string& name) {
    if (name == "num_robots") return SweepSpec::Param::NumRobots;
    if (name == "num_tasks") return SweepSpec::Param::NumTasks;
    if (name == "max_configs_per_task") return SweepSpec::Param::MaxConfigsPerTask;
    throw std::invalid_argument("unknown sweep parameter: " + name);
}

struct SweepRow {
    std::string swept_param;
    int value = 0;
    std::string solver;
    double mean_ratio = 0.0;
    double std_ratio = 0.0;
    double mean_utility = 0.0;
    double mean_time_s = 0.0;
    int empty_count = 0;
    // Present only when the sweep ran with the oracle enabled.
    std::optional<double> mean_opt_ratio;
    std::optional<int> oracle_skipped;
};

namespace detail {

/// Salt for the random_config solver's stream, so it never aliases the
/// instance-generation stream derived from the same child seed.
constexpr std::uint64_t kRandomSolverSalt = 0x52414e44434f4e46ULL;

struct InstanceOutcome {
    bool empty = false;
    double ub = 0.0;
    std::optional<double> optimal;  // absent when skipped or oracle off
    std::vector<double> utility;    // per solver, in spec order
    std::vector<double> time_s;
};

inline GenParams params_for_point(const SweepSpec& spec, int value) {
    GenParams p = spec.base;
    switch (spec.swept) {
        case SweepSpec::Param::NumRobots: p.num_robots = value; break;
        case SweepSpec::Param::NumTasks: p.num_tasks = value; break;
        case SweepSpec::Param::MaxConfigsPerTask: p.max_configs_per_task = value; break;
    }
    // The cap stays fixed across the sweep; instances with fewer robots than
    // the cap use every robot.
    p.max_coalition_size = std::min(p.max_coalition_size, p.num_robots);
    return p;
}

inline InstanceOutcome run_instance(const SweepSpec& spec, const GenParams& point_params,
                                    int value, int run) {
    GenParams params = point_params;
    params.seed = derive_seed(spec.base.seed, static_cast<std::uint64_t>(value),
                              static_cast<std::uint64_t>(run));
    const Problem problem = generate(params);
    const FlatProblem flat = flatten(problem);  // excluded from solver time

    InstanceOutcome out;
    out.ub = upper_bound(flat);
    out.empty = flat.num_assignments() == 0;

    if (spec.oracle) {
        if (flat.num_assignments() <= spec.oracle_assignment_limit) {
            try {
                out.optimal = solve_exact(flat, spec.oracle_budget).total_utility;
            } catch (const OracleBudgetExceeded&) {
                // skipped marker: optimal stays absent
            }
        }
    }

    out.utility.reserve(spec.solvers.size());
    out.time_s.reserve(spec.solvers.size());
    for (const std::string& name : spec.solvers) {
        SolverResult r;
        if (name == "flat_max_util")
            r = solve_flat_max_util(flat);
        else if (name == "flat_rc")
            r = solve_flat_rc(flat);
        else if (name == "flat_rca")
            r = solve_flat_rca(flat);
        else
            r = solve_random_config(problem, derive_seed(params.seed, kRandomSolverSalt, 0));
        out.utility.push_back(r.solution.total_utility);
        out.time_s.push_back(spec.timing ? r.elapsed_s : 0.0);
    }
    return out;
}

}  // namespace detail

/// Runs the sweep: for every (value, run) pair, generates the instance from
/// a child seed derived from (base seed, value, run), runs the selected
/// solvers, and aggregates per-point statistics. Runs are independent and
/// may execute on several worker threads; per-run results land in indexed
/// slots and are reduced in run order, so worker count never changes the
/// aggregate values. Wall-clock columns are only meaningful with one worker.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, int workers = 1) {
    spec.validate();
    if (workers < 1) throw std::invalid_argument("sweep: workers must be >= 1");

    std::vector<SweepRow> rows;
    for (int value : spec.values) {
        const GenParams point_params = detail::params_for_point(spec, value);
        point_params.validate();

        const int runs = spec.runs_per_point;
        std::vector<detail::InstanceOutcome> outcomes(static_cast<std::size_t>(runs));

        if (workers == 1) {
            for (int r = 0; r < runs; ++r)
                outcomes[static_cast<std::size_t>(r)] =
                    detail::run_instance(spec, point_params, value, r);
        } else {
            std::atomic<int> next{0};
            std::exception_ptr failure;
            std::mutex failure_mutex;
            auto work = [&] {
                while (true) {
                    const int r = next.fetch_add(1);
                    if (r >= runs) break;
                    try {
                        outcomes[static_cast<std::size_t>(r)] =
                            detail::run_instance(spec, point_params, value, r);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        break;
                    }
                }
            };
            std::vector<std::thread> pool;
            const int n_threads = std::min(workers, runs);
            pool.reserve(static_cast<std::size_t>(n_threads));
            for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
            for (auto& t : pool) t.join();
            if (failure) std::rethrow_exception(failure);
        }

        int empty_count = 0;
        int oracle_done = 0;
        for (const auto& o : outcomes) {
            if (o.empty) ++empty_count;
            if (o.optimal) ++oracle_done;
        }

        for (std::size_t s = 0; s < spec.solvers.size(); ++s) {
            SweepRow row;
            row.swept_param = param_name(spec.swept);
            row.value = value;
            row.solver = spec.solvers[s];
            row.empty_count = empty_count;

            double sum_ratio = 0.0, sum_ratio_sq = 0.0, sum_utility = 0.0, sum_time = 0.0;
            double sum_opt_ratio = 0.0;
            for (const auto& o : outcomes) {
                const double ratio = performance_ratio(o.utility[s], o.ub);
                sum_ratio += ratio;
                sum_ratio_sq += ratio * ratio;
                sum_utility += o.utility[s];
                sum_time += o.time_s[s];
                if (o.optimal)
                    sum_opt_ratio += *o.optimal > 0.0 ? o.utility[s] / *o.optimal : 1.0;
            }
            const auto n = static_cast<double>(runs);
            row.mean_ratio = sum_ratio / n;
            row.mean_utility = sum_utility / n;
            row.mean_time_s = sum_time / n;
            const double variance =
                runs > 1 ? std::max(0.0, (sum_ratio_sq - n * row.mean_ratio * row.mean_ratio) /
                                             (n - 1.0))
                         : 0.0;
            row.std_ratio = std::sqrt(variance);
            if (spec.oracle) {
                row.mean_opt_ratio = oracle_done > 0
                                         ? sum_opt_ratio / static_cast<double>(oracle_done)
                                         : std::numeric_limits<double>::quiet_NaN();
                row.oracle_skipped = runs - oracle_done;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace detail

/// CSV schema: swept_param,value,solver,mean_ratio,std_ratio,mean_utility,
/// mean_time_s,empty_count; oracle sweeps append mean_opt_ratio and
/// oracle_skipped. One row per (value, solver).
inline void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    const bool with_oracle = !rows.empty() && rows.front().mean_opt_ratio.has_value();
    os << "swept_param,value,solver,mean_ratio,std_ratio,mean_utility,mean_time_s,empty_count";
    if (with_oracle) os << ",mean_opt_ratio,oracle_skipped";
    os << "\n";
    for (const SweepRow& r : rows) {
        os << r.swept_param << ',' << r.value << ',' << r.solver << ','
           << detail::format_double(r.mean_ratio) << ',' << detail::format_double(r.std_ratio)
           << ',' << detail::format_double(r.mean_utility) << ','
           << detail::format_double(r.mean_time_s) << ',' << r.empty_count;
        if (with_oracle)
            os << ',' << detail::format_double(r.mean_opt_ratio.value_or(0.0)) << ','
               << r.oracle_skipped.value_or(0);
        os << "\n";
    }
}

inline SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("", "expected an object");
    SweepSpec spec;

    const auto& swept = detail::require_field(j, "swept_parameter", "");
    if (!swept.is_string()) throw ParseError("/swept_parameter", "expected a string");
    try {
        spec.swept = param_from_name(swept.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ParseError("/swept_parameter", e.what());
    }

    const auto& values = detail::as_array(detail::require_field(j, "values", ""), "/values");
    for (std::size_t i = 0; i < values.size(); ++i)
        spec.values.push_back(detail::as_int(values[i], "/values/" + std::to_string(i)));

    if (auto it = j.find("runs_per_point"); it != j.end())
        spec.runs_per_point = detail::as_int(*it, "/runs_per_point");
    if (auto it = j.find("base"); it != j.end())
        spec.base = gen_params_from_json(*it, "/base");
    if (auto it = j.find("solvers"); it != j.end()) {
        const auto& arr = detail::as_array(*it, "/solvers");
        spec.solvers.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_string())
                throw ParseError("/solvers/" + std::to_string(i), "expected a string");
            spec.solvers.push_back(arr[i].get<std::string>());
        }
    }
    if (auto it = j.find("oracle"); it != j.end()) spec.oracle = detail::as_bool(*it, "/oracle");
    if (auto it = j.find("timing"); it != j.end()) spec.timing = detail::as_bool(*it, "/timing");
    if (auto it = j.find("oracle_assignment_limit"); it != j.end())
        spec.oracle_assignment_limit =
            static_cast<std::size_t>(detail::as_int(*it, "/oracle_assignment_limit"));

    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError("", e.what());
    }
    return spec;
}

}  // namespace mrta
