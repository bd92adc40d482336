#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mrta {

/// Length-H vector of non-negative capability amounts. The same shape holds
/// robot capabilities, configuration requirements, and per-capability costs.
struct CapabilityVector {
    std::vector<double> values;

    CapabilityVector() = default;
    CapabilityVector(std::initializer_list<double> init) : values(init) {}
    explicit CapabilityVector(std::vector<double> v) : values(std::move(v)) {}

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t h) const { return values[h]; }
    double& operator[](std::size_t h) { return values[h]; }

    bool non_negative() const {
        return std::all_of(values.begin(), values.end(),
                           [](double v) { return v >= 0.0; });
    }

    bool operator==(const CapabilityVector& o) const { return values == o.values; }
};

struct Robot {
    int id = 0;
    CapabilityVector capabilities;
};

/// Non-empty set of robot ids, kept sorted and duplicate-free.
struct Coalition {
    std::vector<int> members;

    Coalition() = default;
    Coalition(std::initializer_list<int> init) : members(init) { normalize(); }
    explicit Coalition(std::vector<int> m) : members(std::move(m)) { normalize(); }

    std::size_t size() const { return members.size(); }

    bool contains(int robot_id) const {
        return std::binary_search(members.begin(), members.end(), robot_id);
    }

    bool overlaps(const Coalition& o) const {
        auto a = members.begin();
        auto b = o.members.begin();
        while (a != members.end() && b != o.members.end()) {
            if (*a == *b) return true;
            if (*a < *b)
                ++a;
            else
                ++b;
        }
        return false;
    }

    bool operator==(const Coalition& o) const { return members == o.members; }
    bool operator<(const Coalition& o) const {
        if (members.size() != o.members.size()) return members.size() < o.members.size();
        return members < o.members;
    }

private:
    void normalize() {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
    }
};

struct TaskConfiguration {
    CapabilityVector requirements;
};

struct Task {
    int id = 0;
    double reward = 0.0;
    std::vector<TaskConfiguration> configurations;
};

/// Coordination-cost function over (coalition size, flat task id) pairs.
/// The linear form is what generated experiments use; the table form exists
/// for bit-exact fixtures. Flat task ids number configuration slots in
/// (task, configuration) order, so the same key works before and after
/// flattening.
class CostModel {
public:
    enum class Kind { Linear, Zero, Table };

    CostModel() : kind_(Kind::Linear), coefficient_(4.0) {}

    static CostModel linear(double coefficient) {
        CostModel m;
        m.kind_ = Kind::Linear;
        m.coefficient_ = coefficient;
        return m;
    }

    static CostModel zero() {
        CostModel m;
        m.kind_ = Kind::Zero;
        return m;
    }

    static CostModel table(std::map<std::pair<int, int>, double> entries) {
        CostModel m;
        m.kind_ = Kind::Table;
        m.table_ = std::move(entries);
        return m;
    }

    Kind kind() const { return kind_; }
    double coefficient() const { return coefficient_; }

    /// Cost of assigning a coalition of `coalition_size` robots to the
    /// configuration slot `flat_task_id`. Always >= 0; table lookups with no
    /// entry cost 0.
    double operator()(std::size_t coalition_size, int flat_task_id) const {
        switch (kind_) {
            case Kind::Linear:
                return coefficient_ * static_cast<double>(coalition_size);
            case Kind::Zero:
                return 0.0;
            case Kind::Table: {
                auto it = table_.find({static_cast<int>(coalition_size), flat_task_id});
                return it == table_.end() ? 0.0 : it->second;
            }
        }
        return 0.0;
    }

    const std::map<std::pair<int, int>, double>& table_entries() const { return table_; }

private:
    Kind kind_;
    double coefficient_ = 0.0;
    std::map<std::pair<int, int>, double> table_;
};

/// The full allocation problem: robots, tasks with configuration variants,
/// capability costs W, a cost model, and the coalition size cap k. Immutable
/// after construction by convention; every operation below is a pure
/// function over it.
struct Problem {
    std::vector<Robot> robots;
    std::vector<Task> tasks;
    CapabilityVector capability_costs;  // W
    CostModel cost_model;
    int max_coalition_size = 1;  // k

    std::size_t num_capabilities() const { return capability_costs.size(); }  // H

    /// Number of configuration slots across all tasks.
    int total_configurations() const {
        int n = 0;
        for (const auto& t : tasks) n += static_cast<int>(t.configurations.size());
        return n;
    }

    /// Dense id of the (task, configuration) slot, in (task, config) order.
    int flat_id(int task_id, int config_index) const {
        int id = 0;
        for (int k = 0; k < task_id; ++k)
            id += static_cast<int>(tasks[static_cast<std::size_t>(k)].configurations.size());
        return id + config_index;
    }

    /// Throws std::invalid_argument on the first violated structural
    /// invariant. Feasibility comparisons everywhere use exact >=, so inputs
    /// computed with rounding error should be pre-rounded by the caller.
    void validate() const {
        const std::size_t H = num_capabilities();
        if (!capability_costs.non_negative())
            throw std::invalid_argument("problem: capability costs must be non-negative");
        if (robots.empty()) throw std::invalid_argument("problem: no robots");
        for (std::size_t i = 0; i < robots.size(); ++i) {
            if (robots[i].id != static_cast<int>(i))
                throw std::invalid_argument("problem: robot ids must be 0..N-1 in order");
            if (robots[i].capabilities.size() != H)
                throw std::invalid_argument("problem: robot capability vector length != H");
            if (!robots[i].capabilities.non_negative())
                throw std::invalid_argument("problem: robot capabilities must be non-negative");
        }
        if (tasks.empty()) throw std::invalid_argument("problem: no tasks");
        for (std::size_t k = 0; k < tasks.size(); ++k) {
            const Task& t = tasks[k];
            if (t.id != static_cast<int>(k))
                throw std::invalid_argument("problem: task ids must be 0..N-1 in order");
            if (t.reward <= 0.0)
                throw std::invalid_argument("problem: task reward must be positive");
            if (t.configurations.empty())
                throw std::invalid_argument("problem: task needs at least one configuration");
            for (const auto& cfg : t.configurations) {
                if (cfg.requirements.size() != H)
                    throw std::invalid_argument("problem: requirement vector length != H");
                if (!cfg.requirements.non_negative())
                    throw std::invalid_argument("problem: requirements must be non-negative");
            }
        }
        if (max_coalition_size < 1 || max_coalition_size > static_cast<int>(robots.size()))
            throw std::invalid_argument("problem: max coalition size out of range");
    }
};

/// A coalition committed to one (task, configuration) slot.
struct Assignment {
    Coalition coalition;
    int task_id = 0;
    int config_index = 0;
    double cached_utility = 0.0;
};

/// A conflict-free set of assignments with its summed utility.
struct Solution {
    std::vector<Assignment> assignments;
    double total_utility = 0.0;
};

/// True iff the coalition's summed capabilities dominate the configuration's
/// requirements component-wise.
inline bool satisfies(const Coalition& coalition, const TaskConfiguration& config,
                      const Problem& problem) {
    const std::size_t H = problem.num_capabilities();
    if (config.requirements.size() != H)
        throw std::invalid_argument("satisfies: requirement vector length != H");
    for (int id : coalition.members) {
        if (id < 0 || id >= static_cast<int>(problem.robots.size()))
            throw std::invalid_argument("satisfies: robot id out of range");
    }
    for (std::size_t h = 0; h < H; ++h) {
        double sum = 0.0;
        for (int id : coalition.members)
            sum += problem.robots[static_cast<std::size_t>(id)].capabilities[h];
        if (sum < config.requirements[h]) return false;
    }
    return true;
}

/// Utility of assigning `coalition` to configuration `config_index` of task
/// `task_id`: reward minus capability costs minus coordination cost when the
/// coalition satisfies the configuration, and exactly 0 otherwise. Feasible
/// assignments may still have negative utility.
inline double assignment_utility(const Coalition& coalition, int task_id, int config_index,
                                 const Problem& problem) {
    if (task_id < 0 || task_id >= static_cast<int>(problem.tasks.size()))
        throw std::invalid_argument("assignment_utility: task id out of range");
    const Task& task = problem.tasks[static_cast<std::size_t>(task_id)];
    if (config_index < 0 || config_index >= static_cast<int>(task.configurations.size()))
        throw std::invalid_argument("assignment_utility: config index out of range");
    const TaskConfiguration& config = task.configurations[static_cast<std::size_t>(config_index)];
    if (!satisfies(coalition, config, problem)) return 0.0;
    double requirement_cost = 0.0;
    for (std::size_t h = 0; h < problem.num_capabilities(); ++h)
        requirement_cost += config.requirements[h] * problem.capability_costs[h];
    const double coord_cost =
        problem.cost_model(coalition.size(), problem.flat_id(task_id, config_index));
    return task.reward - requirement_cost - coord_cost;
}

/// All non-empty robot subsets of size <= k. Canonical order: by size, then
/// lexicographically by member list.
inline std::vector<Coalition> enumerate_coalitions(const Problem& problem) {
    const int n = static_cast<int>(problem.robots.size());
    const int k = problem.max_coalition_size;
    if (k < 1 || k > n)
        throw std::invalid_argument("enumerate_coalitions: max coalition size out of range");

    std::vector<Coalition> out;
    std::vector<int> combo;
    for (int size = 1; size <= k; ++size) {
        combo.assign(static_cast<std::size_t>(size), 0);
        std::iota(combo.begin(), combo.end(), 0);
        while (true) {
            Coalition c;
            c.members = combo;
            out.push_back(std::move(c));
            // next combination of `size` out of n
            int i = size - 1;
            while (i >= 0 && combo[static_cast<std::size_t>(i)] == n - size + i) --i;
            if (i < 0) break;
            ++combo[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j)
                combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return out;
}

/// Every feasible (coalition, task, configuration) triple with positive
/// utility, in (task, config, coalition) canonical order. Zero- and
/// negative-utility candidates are dropped: they can never improve the
/// objective, and the greedy methods assume strictly improving steps.
inline std::vector<Assignment> enumerate_assignments(const Problem& problem) {
    const std::vector<Coalition> coalitions = enumerate_coalitions(problem);
    const std::size_t H = problem.num_capabilities();

    // Summed capability vectors, one per coalition, reused across every slot.
    std::vector<std::vector<double>> sums(coalitions.size(), std::vector<double>(H, 0.0));
    for (std::size_t c = 0; c < coalitions.size(); ++c)
        for (int id : coalitions[c].members)
            for (std::size_t h = 0; h < H; ++h)
                sums[c][h] += problem.robots[static_cast<std::size_t>(id)].capabilities[h];

    std::vector<Assignment> out;
    int flat = 0;
    for (const Task& task : problem.tasks) {
        for (int cfg = 0; cfg < static_cast<int>(task.configurations.size()); ++cfg, ++flat) {
            const CapabilityVector& req =
                task.configurations[static_cast<std::size_t>(cfg)].requirements;
            double requirement_cost = 0.0;
            for (std::size_t h = 0; h < H; ++h)
                requirement_cost += req[h] * problem.capability_costs[h];
            for (std::size_t c = 0; c < coalitions.size(); ++c) {
                bool ok = true;
                for (std::size_t h = 0; h < H; ++h) {
                    if (sums[c][h] < req[h]) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                const double utility = task.reward - requirement_cost -
                                       problem.cost_model(coalitions[c].size(), flat);
                if (utility <= 0.0) continue;
                out.push_back(Assignment{coalitions[c], task.id, cfg, utility});
            }
        }
    }
    return out;
}

struct ValidationResult {
    bool ok = true;
    std::string diagnostic;  // names the first violated constraint

    explicit operator bool() const { return ok; }
};

/// Checks robot-disjointness, one configuration per task, per-assignment
/// feasibility, and utility consistency, in that order. Violations are
/// reported in the result, never thrown.
inline ValidationResult validate_solution(const Solution& solution, const Problem& problem) {
    const auto fail = [](std::string msg) { return ValidationResult{false, std::move(msg)}; };

    for (const Assignment& a : solution.assignments) {
        if (a.task_id < 0 || a.task_id >= static_cast<int>(problem.tasks.size()))
            return fail("invalid task id " + std::to_string(a.task_id));
        const auto& cfgs = problem.tasks[static_cast<std::size_t>(a.task_id)].configurations;
        if (a.config_index < 0 || a.config_index >= static_cast<int>(cfgs.size()))
            return fail("invalid config index " + std::to_string(a.config_index));
        if (a.coalition.members.empty()) return fail("empty coalition");
        for (int id : a.coalition.members)
            if (id < 0 || id >= static_cast<int>(problem.robots.size()))
                return fail("invalid robot id " + std::to_string(id));
    }

    std::vector<char> robot_used(problem.robots.size(), 0);
    for (const Assignment& a : solution.assignments)
        for (int id : a.coalition.members) {
            if (robot_used[static_cast<std::size_t>(id)]) return fail("overlapping robots");
            robot_used[static_cast<std::size_t>(id)] = 1;
        }

    std::vector<char> task_used(problem.tasks.size(), 0);
    for (const Assignment& a : solution.assignments) {
        if (task_used[static_cast<std::size_t>(a.task_id)]) return fail("duplicate task");
        task_used[static_cast<std::size_t>(a.task_id)] = 1;
    }

    double total = 0.0;
    for (const Assignment& a : solution.assignments) {
        const auto& cfg = problem.tasks[static_cast<std::size_t>(a.task_id)]
                              .configurations[static_cast<std::size_t>(a.config_index)];
        if (!satisfies(a.coalition, cfg, problem)) return fail("infeasible assignment");
        const double u = assignment_utility(a.coalition, a.task_id, a.config_index, problem);
        if (std::abs(u - a.cached_utility) > 1e-9 * std::max(1.0, std::abs(u)))
            return fail("stale cached utility");
        total += a.cached_utility;
    }
    if (std::abs(total - solution.total_utility) >
        1e-9 * std::max(1.0, std::abs(total)))
        return fail("total utility mismatch");

    return {};
}

}  // namespace mrta
