#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrta/core.hpp"
#include "mrta/rng.hpp"

namespace mrta {

/// Knobs for random instance generation. Defaults follow the experimental
/// protocol this library benchmarks under: seven capability dimensions,
/// coalition cap five, 50% capability presence, capabilities in [0, 8],
/// per-unit costs in [0, 1], rewards in [100, 200], coordination cost 4n.
struct GenParams {
    int num_robots = 8;
    int num_tasks = 10;
    int max_configs_per_task = 5;
    int num_capabilities = 7;   // H
    int max_coalition_size = 5; // k
    double capability_presence_prob = 0.5;
    double capability_lo = 0.0;
    double capability_hi = 8.0;
    double cost_lo = 0.0;
    double cost_hi = 1.0;
    double reward_lo = 100.0;
    double reward_hi = 200.0;
    double cost_coefficient = 4.0;
    bool integer_capabilities = false;  // draw integers instead of reals
    bool fixed_config_count = false;    // every task gets exactly max_configs_per_task
    std::uint64_t seed = 0;

    void validate() const {
        if (num_robots < 1 || num_tasks < 1 || max_configs_per_task < 1 ||
            num_capabilities < 1 || max_coalition_size < 1)
            throw std::invalid_argument("gen params: counts must be >= 1");
        if (max_coalition_size > num_robots)
            throw std::invalid_argument("gen params: max coalition size exceeds robot count");
        if (capability_presence_prob < 0.0 || capability_presence_prob > 1.0)
            throw std::invalid_argument("gen params: presence probability outside [0, 1]");
        if (capability_lo > capability_hi || cost_lo > cost_hi || reward_lo > reward_hi)
            throw std::invalid_argument("gen params: range lo exceeds hi");
        if (capability_lo < 0.0 || cost_lo < 0.0 || reward_lo <= 0.0)
            throw std::invalid_argument("gen params: negative capability/cost or non-positive reward");
    }
};

namespace detail {

inline double draw_amount(Rng& rng, const GenParams& p) {
    if (p.integer_capabilities)
        return static_cast<double>(rng.uniform_int(
            static_cast<std::int64_t>(std::ceil(p.capability_lo)),
            static_cast<std::int64_t>(std::floor(p.capability_hi))));
    return rng.uniform(p.capability_lo, p.capability_hi);
}

inline CapabilityVector draw_capability_vector(Rng& rng, const GenParams& p) {
    CapabilityVector v;
    v.values.resize(static_cast<std::size_t>(p.num_capabilities), 0.0);
    for (auto& entry : v.values)
        if (rng.bernoulli(p.capability_presence_prob)) entry = draw_amount(rng, p);
    return v;
}

}  // namespace detail

/// Draws a problem from the seeded stream. Draw order is fixed and part of
/// the reproducibility contract: capability costs first, then each robot's
/// capabilities, then per task its reward, configuration count, and each
/// configuration's requirements. Instances with no feasible assignment are
/// kept as-is; solvers handle them by returning empty solutions.
inline Problem generate(const GenParams& params) {
    params.validate();
    Rng rng(params.seed);

    Problem problem;
    problem.max_coalition_size = params.max_coalition_size;
    problem.cost_model = CostModel::linear(params.cost_coefficient);

    problem.capability_costs.values.resize(static_cast<std::size_t>(params.num_capabilities));
    for (auto& w : problem.capability_costs.values) w = rng.uniform(params.cost_lo, params.cost_hi);

    problem.robots.reserve(static_cast<std::size_t>(params.num_robots));
    for (int i = 0; i < params.num_robots; ++i)
        problem.robots.push_back(Robot{i, detail::draw_capability_vector(rng, params)});

    problem.tasks.reserve(static_cast<std::size_t>(params.num_tasks));
    for (int k = 0; k < params.num_tasks; ++k) {
        Task task;
        task.id = k;
        task.reward = rng.uniform(params.reward_lo, params.reward_hi);
        const int configs =
            params.fixed_config_count
                ? params.max_configs_per_task
                : static_cast<int>(rng.uniform_int(1, params.max_configs_per_task));
        task.configurations.reserve(static_cast<std::size_t>(configs));
        for (int c = 0; c < configs; ++c)
            task.configurations.push_back(
                TaskConfiguration{detail::draw_capability_vector(rng, params)});
        problem.tasks.push_back(std::move(task));
    }

    problem.validate();
    return problem;
}

/// The two-task fixture where plain utility-greedy strands the second task:
/// the 2-unit variant of t1 consumes both capability-1 robots, while every
/// variant of t2 needs one of them. Picking t1's other variant instead keeps
/// both tasks achievable. Equal rewards, unit costs, zero coordination cost.
inline Problem motivating_example() {
    Problem p;
    p.capability_costs = CapabilityVector{1.0, 1.0, 1.0, 1.0};
    p.cost_model = CostModel::zero();
    p.max_coalition_size = 5;

    p.robots.push_back(Robot{0, CapabilityVector{1.0, 0.0, 0.0, 0.0}});
    p.robots.push_back(Robot{1, CapabilityVector{1.0, 0.0, 0.0, 0.0}});
    p.robots.push_back(Robot{2, CapabilityVector{0.0, 1.0, 1.0, 1.0}});
    p.robots.push_back(Robot{3, CapabilityVector{0.0, 1.0, 1.0, 1.0}});
    p.robots.push_back(Robot{4, CapabilityVector{0.0, 1.0, 1.0, 1.0}});

    Task t1;
    t1.id = 0;
    t1.reward = 100.0;
    t1.configurations.push_back(TaskConfiguration{CapabilityVector{2.0, 0.0, 0.0, 0.0}});
    t1.configurations.push_back(TaskConfiguration{CapabilityVector{1.0, 1.0, 0.0, 1.0}});
    p.tasks.push_back(std::move(t1));

    Task t2;
    t2.id = 1;
    t2.reward = 100.0;
    t2.configurations.push_back(TaskConfiguration{CapabilityVector{1.0, 1.0, 1.0, 0.0}});
    t2.configurations.push_back(TaskConfiguration{CapabilityVector{1.0, 1.0, 0.0, 1.0}});
    p.tasks.push_back(std::move(t2));

    p.validate();
    return p;
}

/// A one-robot instance whose single task is unreachable; every solver must
/// return an empty solution on it.
inline Problem infeasible_example() {
    Problem p;
    p.capability_costs = CapabilityVector{1.0, 1.0};
    p.cost_model = CostModel::zero();
    p.max_coalition_size = 1;
    p.robots.push_back(Robot{0, CapabilityVector{1.0, 0.0}});
    Task t;
    t.id = 0;
    t.reward = 50.0;
    t.configurations.push_back(TaskConfiguration{CapabilityVector{0.0, 3.0}});
    p.tasks.push_back(std::move(t));
    p.validate();
    return p;
}

/// Built-in instances addressable by name from the CLI.
inline const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = {"motivating", "infeasible"};
    return names;
}

inline Problem fixture(const std::string& name) {
    if (name == "motivating") return motivating_example();
    if (name == "infeasible") return infeasible_example();
    throw std::invalid_argument("unknown fixture: " + name);
}

}  // namespace mrta
