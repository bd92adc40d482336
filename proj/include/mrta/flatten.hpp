#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mrta/bitset.hpp"
#include "mrta/core.hpp"

namespace mrta {

/// One (task, configuration) slot promoted to an independent task.
struct FlatTask {
    int flat_id = 0;
    int origin_task = 0;
    int origin_config = 0;
    double reward = 0.0;
    CapabilityVector requirements;
};

/// The flattened problem: every configuration is its own task, and the
/// original validity constraints survive as the conflict relation below.
/// Holds the canonical candidate assignment list plus per-assignment lookup
/// arrays the solvers index by position. Immutable after flatten().
struct FlatProblem {
    Problem base;
    std::vector<FlatTask> flat_tasks;
    std::vector<Assignment> assignments;  // canonical order == ascending flat id

    // Derived, index-aligned with `assignments`.
    std::vector<int> assignment_flat_id;
    std::vector<std::uint64_t> assignment_robot_mask;
    std::vector<double> assignment_utility;
    std::vector<int> assignment_origin;  // origin task per assignment

    std::size_t num_assignments() const { return assignments.size(); }

    int origin_of_flat(int flat_id) const {
        return flat_tasks[static_cast<std::size_t>(flat_id)].origin_task;
    }
};

/// Compiles a problem with task variants into its flat form. The candidate
/// list is exactly core enumeration re-keyed by flat id; robot sets are also
/// packed into 64-bit masks, which caps supported instances at 64 robots.
inline FlatProblem flatten(const Problem& problem) {
    if (problem.robots.size() > 64)
        throw std::invalid_argument("flatten: more than 64 robots is unsupported");

    FlatProblem flat;
    flat.base = problem;

    int flat_id = 0;
    for (const Task& task : problem.tasks)
        for (int cfg = 0; cfg < static_cast<int>(task.configurations.size()); ++cfg) {
            flat.flat_tasks.push_back(FlatTask{
                flat_id++, task.id, cfg, task.reward,
                task.configurations[static_cast<std::size_t>(cfg)].requirements});
        }

    flat.assignments = enumerate_assignments(problem);
    flat.assignment_flat_id.reserve(flat.assignments.size());
    flat.assignment_robot_mask.reserve(flat.assignments.size());
    flat.assignment_utility.reserve(flat.assignments.size());
    flat.assignment_origin.reserve(flat.assignments.size());
    for (const Assignment& a : flat.assignments) {
        flat.assignment_flat_id.push_back(problem.flat_id(a.task_id, a.config_index));
        std::uint64_t mask = 0;
        for (int id : a.coalition.members) mask |= 1ULL << id;
        flat.assignment_robot_mask.push_back(mask);
        flat.assignment_utility.push_back(a.cached_utility);
        flat.assignment_origin.push_back(a.task_id);
    }
    return flat;
}

/// Two assignments conflict when their coalitions share a robot, they target
/// the same flat task, or they target different variants of the same origin
/// task. The third clause is what keeps flat solutions valid for the
/// original problem; the second is its degenerate special case and fires on
/// its own only when origin metadata is absent.
inline bool conflicts(const Assignment& a, const Assignment& b) {
    if (a.coalition.overlaps(b.coalition)) return true;
    if (a.task_id == b.task_id) return true;  // covers same slot and sibling variants
    return false;
}

/// Index-based conflict queries over a FlatProblem's assignment list, with
/// the full pairwise relation precomputed as bitset rows. Quadratic in the
/// candidate count; intended for lists up to roughly 20k entries. The
/// relation is symmetric and irreflexive.
class ConflictOracle {
public:
    explicit ConflictOracle(const FlatProblem& flat) {
        const std::size_t n = flat.num_assignments();
        rows_.assign(n, DynamicBitset(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const bool c = (flat.assignment_robot_mask[i] & flat.assignment_robot_mask[j]) != 0 ||
                               flat.assignment_origin[i] == flat.assignment_origin[j];
                if (c) {
                    rows_[i].set(j);
                    rows_[j].set(i);
                }
            }
        }
    }

    std::size_t size() const { return rows_.size(); }

    bool conflicts(std::size_t a, std::size_t b) const {
        return a != b && rows_[a].test(b);
    }

    const DynamicBitset& row(std::size_t a) const { return rows_[a]; }

    /// Subset of `remaining` that conflicts with assignment `a`; `a` itself
    /// is never included. `a` need not be a member of `remaining`.
    DynamicBitset conflict_set(std::size_t a, const DynamicBitset& remaining) const {
        DynamicBitset out = rows_[a];
        out &= remaining;
        return out;
    }

    /// The greedy-step transition: removes `chosen` and everything
    /// conflicting with it from `remaining`.
    DynamicBitset prune(const DynamicBitset& remaining, std::size_t chosen) const {
        if (!remaining.test(chosen))
            throw std::invalid_argument("prune: chosen assignment not in remaining set");
        DynamicBitset out = remaining;
        out.reset(chosen);
        out.subtract(rows_[chosen]);
        return out;
    }

private:
    std::vector<DynamicBitset> rows_;
};

/// Predicate form of the greedy-step transition, for callers that do not
/// hold an oracle: clears `chosen` and all of its conflicts from `remaining`
/// in place.
inline void prune_in_place(const FlatProblem& flat, DynamicBitset& remaining,
                           std::size_t chosen) {
    if (!remaining.test(chosen))
        throw std::invalid_argument("prune: chosen assignment not in remaining set");
    const std::uint64_t mask = flat.assignment_robot_mask[chosen];
    const int origin = flat.assignment_origin[chosen];
    remaining.reset(chosen);
    remaining.for_each_set([&](std::size_t j) {
        if ((flat.assignment_robot_mask[j] & mask) != 0 || flat.assignment_origin[j] == origin)
            remaining.reset(j);
    });
}

}  // namespace mrta
