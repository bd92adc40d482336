#pragma once

// Independent reference implementations used as oracles by the unit and
// acceptance suites. Everything here is written as a direct, slow
// transliteration of the selection rules, with no shared machinery with the
// library implementations beyond the problem types themselves.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mrta/core.hpp"
#include "mrta/flatten.hpp"
#include "mrta/instance_gen.hpp"
#include "mrta/rng.hpp"

namespace testsupport {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

inline bool members_share_robot(const mrta::Assignment& a, const mrta::Assignment& b) {
    for (int x : a.coalition.members)
        for (int y : b.coalition.members)
            if (x == y) return true;
    return false;
}

/// Pairwise conflict rule, written out directly from its definition.
inline bool reference_conflicts(const mrta::Assignment& a, const mrta::Assignment& b) {
    if (members_share_robot(a, b)) return true;
    if (a.task_id == b.task_id) return true;
    return false;
}

struct GreedyTrace {
    std::vector<std::size_t> sequence;  // indices into flat.assignments
    std::vector<double> criteria;
    double total = 0.0;
};

inline std::vector<std::size_t> live_indices(const std::vector<char>& alive) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < alive.size(); ++i)
        if (alive[i]) out.push_back(i);
    return out;
}

inline void reference_prune(const mrta::FlatProblem& flat, std::vector<char>& alive,
                            std::size_t chosen) {
    for (std::size_t j = 0; j < alive.size(); ++j)
        if (alive[j] &&
            (j == chosen || reference_conflicts(flat.assignments[chosen], flat.assignments[j])))
            alive[j] = 0;
}

inline GreedyTrace reference_flat_max_util(const mrta::FlatProblem& flat) {
    GreedyTrace trace;
    std::vector<char> alive(flat.num_assignments(), 1);
    while (true) {
        std::size_t best = npos;
        double best_value = -std::numeric_limits<double>::infinity();
        for (std::size_t j : live_indices(alive)) {
            if (flat.assignments[j].cached_utility > best_value) {
                best_value = flat.assignments[j].cached_utility;
                best = j;
            }
        }
        if (best == npos) break;
        trace.sequence.push_back(best);
        trace.criteria.push_back(best_value);
        trace.total += flat.assignments[best].cached_utility;
        reference_prune(flat, alive, best);
    }
    return trace;
}

inline GreedyTrace reference_flat_rc(const mrta::FlatProblem& flat) {
    GreedyTrace trace;
    std::vector<char> alive(flat.num_assignments(), 1);
    while (true) {
        const std::vector<std::size_t> live = live_indices(alive);
        if (live.empty()) break;

        // Live conflict-set size of every remaining assignment.
        std::vector<std::size_t> degree(flat.num_assignments(), 0);
        for (std::size_t j : live)
            for (std::size_t m : live)
                if (m != j && reference_conflicts(flat.assignments[j], flat.assignments[m]))
                    ++degree[j];

        std::size_t best = npos;
        double best_value = -std::numeric_limits<double>::infinity();
        for (std::size_t x : live) {
            double penalty = 0.0;
            for (std::size_t j : live) {
                if (j == x || !reference_conflicts(flat.assignments[x], flat.assignments[j]))
                    continue;
                if (degree[j] == 0)
                    throw std::logic_error("conflicting neighbor with empty conflict set");
                penalty += flat.assignments[j].cached_utility / static_cast<double>(degree[j]);
            }
            const double rho = flat.assignments[x].cached_utility - penalty;
            if (rho > best_value) {
                best_value = rho;
                best = x;
            }
        }
        trace.sequence.push_back(best);
        trace.criteria.push_back(best_value);
        trace.total += flat.assignments[best].cached_utility;
        reference_prune(flat, alive, best);
    }
    return trace;
}

inline GreedyTrace reference_flat_rca(const mrta::FlatProblem& flat, bool per_task_averaging) {
    GreedyTrace trace;
    const std::size_t num_flat = flat.flat_tasks.size();
    std::vector<char> alive(flat.num_assignments(), 1);
    while (true) {
        const std::vector<std::size_t> live = live_indices(alive);
        if (live.empty()) break;

        std::size_t best = npos;
        double best_value = -std::numeric_limits<double>::infinity();
        for (std::size_t x : live) {
            const mrta::Assignment& cand = flat.assignments[x];
            double penalty = 0.0;
            for (int robot : cand.coalition.members) {
                for (std::size_t l = 0; l < num_flat; ++l) {
                    if (flat.flat_tasks[l].origin_task == cand.task_id) continue;

                    std::vector<std::size_t> to_l;
                    std::vector<std::size_t> to_l_with_robot;
                    std::vector<std::size_t> with_robot;
                    for (std::size_t j : live) {
                        const bool at_l =
                            flat.assignment_flat_id[j] == static_cast<int>(l);
                        const bool has_robot = flat.assignments[j].coalition.contains(robot);
                        if (at_l) to_l.push_back(j);
                        if (at_l && has_robot) to_l_with_robot.push_back(j);
                        if (has_robot) with_robot.push_back(j);
                    }
                    if (to_l.empty()) continue;
                    const double beta = static_cast<double>(to_l_with_robot.size()) /
                                        static_cast<double>(to_l.size());
                    double loss = 0.0;
                    if (per_task_averaging) {
                        if (to_l_with_robot.empty()) continue;
                        double sum = 0.0;
                        for (std::size_t j : to_l_with_robot)
                            sum += beta * flat.assignments[j].cached_utility;
                        loss = sum / static_cast<double>(to_l_with_robot.size());
                    } else {
                        if (with_robot.empty()) continue;
                        double sum = 0.0;
                        for (std::size_t j : with_robot)
                            sum += beta * flat.assignments[j].cached_utility;
                        loss = sum / static_cast<double>(with_robot.size());
                    }
                    penalty += loss;
                }
            }
            const double rho = cand.cached_utility - penalty;
            if (rho > best_value) {
                best_value = rho;
                best = x;
            }
        }
        trace.sequence.push_back(best);
        trace.criteria.push_back(best_value);
        trace.total += flat.assignments[best].cached_utility;
        reference_prune(flat, alive, best);
    }
    return trace;
}

/// Exhaustive search over conflict-free subsets, with no bound pruning.
/// Returns the best total utility. Throws if the node cap trips.
inline double brute_force_optimal(const mrta::FlatProblem& flat,
                                  std::uint64_t node_cap = 200'000'000) {
    const std::size_t n = flat.num_assignments();
    double best = 0.0;
    std::vector<std::size_t> chosen;
    std::uint64_t nodes = 0;

    std::function<void(std::size_t, double)> go = [&](std::size_t index, double total) {
        if (++nodes > node_cap) throw std::runtime_error("brute force node cap exceeded");
        if (total > best) best = total;
        if (index == n) return;
        go(index + 1, total);  // exclude
        for (std::size_t c : chosen)
            if (reference_conflicts(flat.assignments[index], flat.assignments[c])) return;
        chosen.push_back(index);
        go(index + 1, total + flat.assignments[index].cached_utility);
        chosen.pop_back();
    };
    go(0, 0.0);
    return best;
}

/// Max-utility greedy directly on a problem whose tasks all have exactly one
/// configuration, with conflicts meaning shared robots or same task. This is
/// the pre-flattening heuristic the degenerate case must reduce to.
inline GreedyTrace unflattened_max_util(const mrta::Problem& problem) {
    for (const auto& t : problem.tasks)
        if (t.configurations.size() != 1)
            throw std::invalid_argument("unflattened greedy needs single-configuration tasks");

    const std::vector<mrta::Assignment> candidates = mrta::enumerate_assignments(problem);
    GreedyTrace trace;
    std::vector<char> alive(candidates.size(), 1);
    while (true) {
        std::size_t best = npos;
        double best_value = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < candidates.size(); ++j)
            if (alive[j] && candidates[j].cached_utility > best_value) {
                best_value = candidates[j].cached_utility;
                best = j;
            }
        if (best == npos) break;
        trace.sequence.push_back(best);
        trace.criteria.push_back(best_value);
        trace.total += candidates[best].cached_utility;
        for (std::size_t j = 0; j < candidates.size(); ++j)
            if (alive[j] && (j == best || members_share_robot(candidates[best], candidates[j]) ||
                             candidates[best].task_id == candidates[j].task_id))
                alive[j] = 0;
    }
    return trace;
}

/// Resource-centric greedy directly on a single-configuration problem.
inline GreedyTrace unflattened_rc(const mrta::Problem& problem) {
    for (const auto& t : problem.tasks)
        if (t.configurations.size() != 1)
            throw std::invalid_argument("unflattened greedy needs single-configuration tasks");

    const std::vector<mrta::Assignment> candidates = mrta::enumerate_assignments(problem);
    const auto conflict = [&](std::size_t a, std::size_t b) {
        return members_share_robot(candidates[a], candidates[b]) ||
               candidates[a].task_id == candidates[b].task_id;
    };

    GreedyTrace trace;
    std::vector<char> alive(candidates.size(), 1);
    while (true) {
        std::vector<std::size_t> live;
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (alive[i]) live.push_back(i);
        if (live.empty()) break;

        std::vector<std::size_t> degree(candidates.size(), 0);
        for (std::size_t j : live)
            for (std::size_t m : live)
                if (m != j && conflict(j, m)) ++degree[j];

        std::size_t best = npos;
        double best_value = -std::numeric_limits<double>::infinity();
        for (std::size_t x : live) {
            double penalty = 0.0;
            for (std::size_t j : live) {
                if (j == x || !conflict(x, j)) continue;
                penalty += candidates[j].cached_utility / static_cast<double>(degree[j]);
            }
            const double rho = candidates[x].cached_utility - penalty;
            if (rho > best_value) {
                best_value = rho;
                best = x;
            }
        }
        trace.sequence.push_back(best);
        trace.criteria.push_back(best_value);
        trace.total += candidates[best].cached_utility;
        for (std::size_t j = 0; j < candidates.size(); ++j)
            if (alive[j] && (j == best || conflict(best, j))) alive[j] = 0;
    }
    return trace;
}

/// Small random instance parameters for oracle-scale corpora. Sizes are
/// drawn from the given caps so the exact search stays cheap.
inline mrta::GenParams tiny_params(std::uint64_t seed, int max_robots = 6, int max_tasks = 4,
                                   int max_configs = 3, int max_k = 3) {
    mrta::Rng rng(seed);
    mrta::GenParams p;
    p.num_robots = static_cast<int>(rng.uniform_int(2, max_robots));
    p.num_tasks = static_cast<int>(rng.uniform_int(1, max_tasks));
    p.max_configs_per_task = static_cast<int>(rng.uniform_int(1, max_configs));
    p.max_coalition_size =
        static_cast<int>(rng.uniform_int(1, std::min(max_k, p.num_robots)));
    p.seed = mrta::derive_seed(seed, 0xC0FFEEULL, 1);
    return p;
}

}  // namespace testsupport
