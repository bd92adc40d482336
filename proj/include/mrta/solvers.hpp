#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mrta/bitset.hpp"
#include "mrta/core.hpp"
#include "mrta/flatten.hpp"
#include "mrta/rng.hpp"

namespace mrta {

/// One greedy decision: which assignment was taken at step `index` and the
/// value of the solver's selection metric for it.
struct GreedyStep {
    int index = 0;
    Assignment chosen;
    double criterion = 0.0;
};

struct SolverResult {
    Solution solution;
    std::vector<GreedyStep> steps;
    double elapsed_s = 0.0;
};

/// Thrown by solve_exact when the node budget runs out. The oracle never
/// silently returns a suboptimal answer.
struct OracleBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

class StopWatch {
public:
    StopWatch() : t0_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    std::chrono::steady_clock::time_point t0_;
};

inline void push_choice(SolverResult& result, const FlatProblem& flat, std::size_t index,
                        double criterion) {
    const Assignment& a = flat.assignments[index];
    result.steps.push_back(
        GreedyStep{static_cast<int>(result.steps.size()), a, criterion});
    result.solution.assignments.push_back(a);
    result.solution.total_utility += a.cached_utility;
}

/// In-place subset-sum transform: afterwards t[mask] holds the sum of the
/// original entries over all submasks of mask.
template <typename T>
void sos_transform(std::vector<T>& t, int bits) {
    for (int b = 0; b < bits; ++b) {
        const std::size_t stride = std::size_t{1} << b;
        for (std::size_t mask = 0; mask < t.size(); ++mask)
            if (mask & stride) t[mask] += t[mask ^ stride];
    }
}

}  // namespace detail

/// Greedy argmax on plain assignment utility over the remaining candidate
/// set, pruning conflicts (including sibling variants of the chosen task)
/// after every pick. Ties go to the lowest canonical index.
inline SolverResult solve_flat_max_util(const FlatProblem& flat) {
    detail::StopWatch timer;
    SolverResult result;
    const std::size_t n = flat.num_assignments();
    DynamicBitset remaining(n, true);

    while (true) {
        std::size_t best = n;
        double best_value = -std::numeric_limits<double>::infinity();
        remaining.for_each_set([&](std::size_t j) {
            const double u = flat.assignment_utility[j];
            if (u > best_value) {
                best_value = u;
                best = j;
            }
        });
        if (best == n) break;
        detail::push_choice(result, flat, best, best_value);
        prune_in_place(flat, remaining, best);
    }
    result.elapsed_s = timer.seconds();
    return result;
}

enum class RcStrategy {
    Auto,       ///< SubsetSum when the robot count permits, otherwise Rows.
    SubsetSum,  ///< Conflict sums via subset-sum tables over robot masks.
    Rows,       ///< Conflict sums via precomputed adjacency bitset rows.
};

namespace detail {

constexpr int kSosMaxRobots = 16;

/// Per-step state for the resource-centric metric
///   rho(x) = U(x) - sum over conflicts j of U(j) / |conflicts of j|,
/// with every conflict set taken inside the live remaining set. Both
/// implementations below produce the same values up to summation order.
struct RcScratch {
    std::vector<std::uint32_t> live;
    std::vector<double> weight;       // U(j) / live conflict count of j
    std::vector<std::size_t> degree;  // live conflict count per assignment
};

/// Computes live conflict degrees and the per-candidate penalty sums without
/// touching assignment pairs. For an R-robot instance, a subset-sum table
/// over 2^R robot masks answers "how many remaining candidates are disjoint
/// from this coalition" in O(1), and the same table over weights answers the
/// penalty sum. Same-origin candidates are handled by one extra table per
/// origin task, rebuilt per step.
class RcSubsetSum {
public:
    explicit RcSubsetSum(const FlatProblem& flat)
        : flat_(flat),
          robot_bits_(static_cast<int>(flat.base.robots.size())),
          table_size_(std::size_t{1} << robot_bits_),
          full_mask_(table_size_ - 1),
          count_(table_size_, 0),
          weight_sum_(table_size_, 0.0),
          origin_count_(flat.base.tasks.size(), std::vector<std::uint32_t>()),
          origin_weight_(flat.base.tasks.size(), std::vector<double>()) {
        for (auto& v : origin_count_) v.assign(table_size_, 0);
        for (auto& v : origin_weight_) v.assign(table_size_, 0.0);
    }

    void compute(RcScratch& s) {
        const auto& mask = flat_.assignment_robot_mask;
        const auto& origin = flat_.assignment_origin;
        const auto& utility = flat_.assignment_utility;
        const std::size_t live_count = s.live.size();

        // Degrees first: the weights depend on them.
        std::fill(count_.begin(), count_.end(), 0);
        for (auto& v : origin_count_) std::fill(v.begin(), v.end(), 0);
        for (auto j : s.live) {
            ++count_[mask[j]];
            ++origin_count_[static_cast<std::size_t>(origin[j])][mask[j]];
        }
        detail::sos_transform(count_, robot_bits_);
        for (auto& v : origin_count_) detail::sos_transform(v, robot_bits_);

        for (auto j : s.live) {
            const std::size_t disjoint = count_[full_mask_ & ~mask[j]];
            const std::size_t disjoint_same_origin =
                origin_count_[static_cast<std::size_t>(origin[j])][full_mask_ & ~mask[j]];
            s.degree[j] = live_count - disjoint + disjoint_same_origin - 1;
            s.weight[j] = s.degree[j] > 0 ? utility[j] / static_cast<double>(s.degree[j]) : 0.0;
        }

        std::fill(weight_sum_.begin(), weight_sum_.end(), 0.0);
        for (auto& v : origin_weight_) std::fill(v.begin(), v.end(), 0.0);
        double total_weight = 0.0;
        for (auto j : s.live) {
            weight_sum_[mask[j]] += s.weight[j];
            origin_weight_[static_cast<std::size_t>(origin[j])][mask[j]] += s.weight[j];
            total_weight += s.weight[j];
        }
        detail::sos_transform(weight_sum_, robot_bits_);
        for (auto& v : origin_weight_) detail::sos_transform(v, robot_bits_);
        total_weight_ = total_weight;
    }

    /// Penalty of candidate x: sum of weight over everything in the live set
    /// that conflicts with x.
    double penalty(std::size_t x, const RcScratch& s) const {
        const std::uint64_t m = flat_.assignment_robot_mask[x];
        const auto o = static_cast<std::size_t>(flat_.assignment_origin[x]);
        const double disjoint_weight = weight_sum_[full_mask_ & ~m];
        const double disjoint_same_origin = origin_weight_[o][full_mask_ & ~m];
        return total_weight_ - disjoint_weight + disjoint_same_origin - s.weight[x];
    }

private:
    const FlatProblem& flat_;
    int robot_bits_;
    std::size_t table_size_;
    std::uint64_t full_mask_;
    std::vector<std::uint32_t> count_;
    std::vector<double> weight_sum_;
    std::vector<std::vector<std::uint32_t>> origin_count_;
    std::vector<std::vector<double>> origin_weight_;
    double total_weight_ = 0.0;
};

}  // namespace detail

/// Resource-centric greedy after flattening: each candidate's utility is
/// discounted by the expected utility its conflicts would lose, spreading
/// every conflicting assignment's utility over that assignment's own live
/// conflict count. Conflict sets are recomputed against the remaining set at
/// every step.
inline SolverResult solve_flat_rc(const FlatProblem& flat,
                                  RcStrategy strategy = RcStrategy::Auto) {
    detail::StopWatch timer;
    SolverResult result;
    const std::size_t n = flat.num_assignments();

    if (strategy == RcStrategy::Auto) {
        strategy = static_cast<int>(flat.base.robots.size()) <= detail::kSosMaxRobots
                       ? RcStrategy::SubsetSum
                       : RcStrategy::Rows;
    } else if (strategy == RcStrategy::SubsetSum &&
               static_cast<int>(flat.base.robots.size()) > detail::kSosMaxRobots) {
        // Table size is 2^robots; past the auto threshold that is an
        // allocation bomb, not a slow path.
        throw std::invalid_argument("flat_rc: subset-sum strategy supports at most 16 robots");
    }

    DynamicBitset remaining(n, true);
    detail::RcScratch scratch;
    scratch.weight.assign(n, 0.0);
    scratch.degree.assign(n, 0);

    std::optional<detail::RcSubsetSum> sos;
    std::optional<ConflictOracle> oracle;
    if (strategy == RcStrategy::SubsetSum)
        sos.emplace(flat);
    else
        oracle.emplace(flat);

    while (remaining.any()) {
        scratch.live.clear();
        remaining.for_each_set([&](std::size_t j) {
            scratch.live.push_back(static_cast<std::uint32_t>(j));
        });

        std::size_t best = n;
        double best_value = -std::numeric_limits<double>::infinity();
        if (sos) {
            sos->compute(scratch);
            for (auto x : scratch.live) {
                const double rho = flat.assignment_utility[x] - sos->penalty(x, scratch);
                if (rho > best_value) {
                    best_value = rho;
                    best = x;
                }
            }
        } else {
            for (auto j : scratch.live) {
                scratch.degree[j] = oracle->row(j).count_and(remaining);
                scratch.weight[j] =
                    scratch.degree[j] > 0
                        ? flat.assignment_utility[j] / static_cast<double>(scratch.degree[j])
                        : 0.0;
            }
            for (auto x : scratch.live) {
                double penalty = 0.0;
                (oracle->row(x) & remaining).for_each_set([&](std::size_t j) {
                    penalty += scratch.weight[j];
                });
                const double rho = flat.assignment_utility[x] - penalty;
                if (rho > best_value) {
                    best_value = rho;
                    best = x;
                }
            }
        }

        detail::push_choice(result, flat, best, best_value);
        prune_in_place(flat, remaining, best);
    }
    result.elapsed_s = timer.seconds();
    return result;
}

/// Domain over which the expected per-task loss is averaged.
enum class RcaAveraging {
    PerTaskAssignments,   ///< remaining assignments to that flat task containing the robot
    AllRobotAssignments,  ///< every remaining assignment containing the robot
};

/// Approximated resource-centric greedy: instead of pairwise conflict sums,
/// aggregates per (robot, flat task). beta is the fraction of a flat task's
/// remaining assignments that depend on a robot; the candidate pays, for
/// every robot it uses, the robots' average expected loss across flat tasks
/// of other origin tasks. All aggregates are rebuilt against the remaining
/// set each step.
inline SolverResult solve_flat_rca(const FlatProblem& flat,
                                   RcaAveraging averaging = RcaAveraging::PerTaskAssignments) {
    detail::StopWatch timer;
    SolverResult result;
    const std::size_t n = flat.num_assignments();
    const std::size_t num_robots = flat.base.robots.size();
    const std::size_t num_flat = flat.flat_tasks.size();
    const std::size_t num_origin = flat.base.tasks.size();

    DynamicBitset remaining(n, true);
    std::vector<std::uint32_t> live;

    std::vector<double> flat_count(num_flat);                        // |M'_l|
    std::vector<double> robot_flat_count(num_robots * num_flat);     // |M'_il|
    std::vector<double> robot_flat_utility(num_robots * num_flat);   // sum U over M'_il
    std::vector<double> robot_count(num_robots);                     // |M'_i|
    std::vector<double> robot_utility(num_robots);                   // sum U over M'_i
    std::vector<double> loss_total(num_robots);                      // sum_l phi_il
    std::vector<double> loss_by_origin(num_robots * num_origin);     // sum_{l in origin} phi_il

    while (remaining.any()) {
        live.clear();
        remaining.for_each_set([&](std::size_t j) {
            live.push_back(static_cast<std::uint32_t>(j));
        });

        std::fill(flat_count.begin(), flat_count.end(), 0.0);
        std::fill(robot_flat_count.begin(), robot_flat_count.end(), 0.0);
        std::fill(robot_flat_utility.begin(), robot_flat_utility.end(), 0.0);
        std::fill(robot_count.begin(), robot_count.end(), 0.0);
        std::fill(robot_utility.begin(), robot_utility.end(), 0.0);
        std::fill(loss_total.begin(), loss_total.end(), 0.0);
        std::fill(loss_by_origin.begin(), loss_by_origin.end(), 0.0);

        for (auto j : live) {
            const auto l = static_cast<std::size_t>(flat.assignment_flat_id[j]);
            const double u = flat.assignment_utility[j];
            flat_count[l] += 1.0;
            for (int robot : flat.assignments[j].coalition.members) {
                const auto i = static_cast<std::size_t>(robot);
                robot_flat_count[i * num_flat + l] += 1.0;
                robot_flat_utility[i * num_flat + l] += u;
                robot_count[i] += 1.0;
                robot_utility[i] += u;
            }
        }

        for (std::size_t i = 0; i < num_robots; ++i) {
            for (std::size_t l = 0; l < num_flat; ++l) {
                if (flat_count[l] == 0.0) continue;  // no remaining assignments, no loss
                double loss = 0.0;
                if (averaging == RcaAveraging::PerTaskAssignments) {
                    // mean over M'_il of beta_il * U == beta_il * meanU(M'_il)
                    loss = robot_flat_utility[i * num_flat + l] / flat_count[l];
                } else if (robot_count[i] > 0.0) {
                    const double beta = robot_flat_count[i * num_flat + l] / flat_count[l];
                    loss = beta * (robot_utility[i] / robot_count[i]);
                }
                if (loss == 0.0) continue;
                loss_total[i] += loss;
                const auto o = static_cast<std::size_t>(flat.origin_of_flat(static_cast<int>(l)));
                loss_by_origin[i * num_origin + o] += loss;
            }
        }

        std::size_t best = n;
        double best_value = -std::numeric_limits<double>::infinity();
        for (auto x : live) {
            const auto o = static_cast<std::size_t>(flat.assignment_origin[x]);
            double penalty = 0.0;
            for (int robot : flat.assignments[x].coalition.members) {
                const auto i = static_cast<std::size_t>(robot);
                penalty += loss_total[i] - loss_by_origin[i * num_origin + o];
            }
            const double rho = flat.assignment_utility[x] - penalty;
            if (rho > best_value) {
                best_value = rho;
                best = x;
            }
        }

        detail::push_choice(result, flat, best, best_value);
        prune_in_place(flat, remaining, best);
    }
    result.elapsed_s = timer.seconds();
    return result;
}

/// Baseline: sample one configuration per task uniformly, then run the
/// max-utility greedy on the reduced single-variant problem. Deterministic
/// given the seed. Reported assignments are re-indexed to the original
/// problem's configuration slots.
inline SolverResult solve_random_config(const Problem& problem, std::uint64_t seed) {
    detail::StopWatch timer;
    Rng rng(seed);

    std::vector<int> chosen(problem.tasks.size());
    for (std::size_t k = 0; k < problem.tasks.size(); ++k)
        chosen[k] = static_cast<int>(rng.uniform_int(
            0, static_cast<std::int64_t>(problem.tasks[k].configurations.size()) - 1));

    Problem reduced;
    reduced.robots = problem.robots;
    reduced.capability_costs = problem.capability_costs;
    reduced.max_coalition_size = problem.max_coalition_size;
    reduced.tasks.reserve(problem.tasks.size());
    for (std::size_t k = 0; k < problem.tasks.size(); ++k) {
        const Task& t = problem.tasks[k];
        reduced.tasks.push_back(
            Task{t.id, t.reward, {t.configurations[static_cast<std::size_t>(chosen[k])]}});
    }
    if (problem.cost_model.kind() == CostModel::Kind::Table) {
        // Re-key table entries so slot costs follow the sampled configurations.
        std::map<std::pair<int, int>, double> entries;
        for (std::size_t k = 0; k < problem.tasks.size(); ++k) {
            const int original_flat = problem.flat_id(static_cast<int>(k), chosen[k]);
            for (const auto& [key, cost] : problem.cost_model.table_entries())
                if (key.second == original_flat)
                    entries[{key.first, static_cast<int>(k)}] = cost;
        }
        reduced.cost_model = CostModel::table(std::move(entries));
    } else {
        reduced.cost_model = problem.cost_model;
    }

    SolverResult result = solve_flat_max_util(flatten(reduced));

    for (Assignment& a : result.solution.assignments)
        a.config_index = chosen[static_cast<std::size_t>(a.task_id)];
    for (GreedyStep& s : result.steps)
        s.chosen.config_index = chosen[static_cast<std::size_t>(s.chosen.task_id)];

    result.elapsed_s = timer.seconds();
    return result;
}

/// Conflict-free relaxation bound: for each origin task, the best utility
/// any single candidate assignment to any of its variants achieves, summed
/// over tasks without conflict checking. Dominates the optimum.
inline double upper_bound(const FlatProblem& flat) {
    std::vector<double> best(flat.base.tasks.size(), 0.0);
    for (std::size_t i = 0; i < flat.num_assignments(); ++i) {
        auto& slot = best[static_cast<std::size_t>(flat.assignment_origin[i])];
        slot = std::max(slot, flat.assignment_utility[i]);
    }
    double total = 0.0;
    for (double b : best) total += b;
    return total;
}

namespace detail {

struct ExactSearch {
    const FlatProblem& flat;
    const ConflictOracle& oracle;
    std::uint64_t budget;
    std::uint64_t nodes = 0;
    double best_utility = 0.0;
    std::vector<std::size_t> best_set = {};
    std::vector<std::size_t> current = {};
    std::vector<double> origin_best = {};

    double bound(const DynamicBitset& remaining) {
        std::fill(origin_best.begin(), origin_best.end(), 0.0);
        remaining.for_each_set([&](std::size_t j) {
            auto& slot = origin_best[static_cast<std::size_t>(flat.assignment_origin[j])];
            slot = std::max(slot, flat.assignment_utility[j]);
        });
        double total = 0.0;
        for (double b : origin_best) total += b;
        return total;
    }

    void dfs(const DynamicBitset& remaining, double utility) {
        if (++nodes > budget)
            throw OracleBudgetExceeded("oracle budget exceeded after " +
                                       std::to_string(budget) + " nodes");
        if (utility > best_utility) {
            best_utility = utility;
            best_set = current;
        }
        if (remaining.none()) return;
        // Prune only when the relaxation is worse than the incumbent by more
        // than summation noise, so float rounding can never hide an optimum.
        if (utility + bound(remaining) <=
            best_utility - 1e-9 * std::max(1.0, best_utility))
            return;

        std::size_t branch = flat.num_assignments();
        double branch_utility = -1.0;
        remaining.for_each_set([&](std::size_t j) {
            if (flat.assignment_utility[j] > branch_utility) {
                branch_utility = flat.assignment_utility[j];
                branch = j;
            }
        });

        current.push_back(branch);
        dfs(oracle.prune(remaining, branch), utility + flat.assignment_utility[branch]);
        current.pop_back();

        DynamicBitset without = remaining;
        without.reset(branch);
        dfs(without, utility);
    }
};

}  // namespace detail

/// Exact oracle: branch and bound over include/exclude decisions on the
/// canonical candidate list, pruning with the conflict-free per-task bound.
/// Exponential in the worst case; meant for candidate lists up to a couple
/// thousand entries. Throws OracleBudgetExceeded when the node limit trips.
inline Solution solve_exact(const FlatProblem& flat, std::uint64_t node_budget = 10'000'000) {
    const ConflictOracle oracle(flat);
    detail::ExactSearch search{flat, oracle, node_budget};
    search.origin_best.assign(flat.base.tasks.size(), 0.0);

    DynamicBitset all(flat.num_assignments(), true);
    search.dfs(all, 0.0);

    std::sort(search.best_set.begin(), search.best_set.end());
    Solution solution;
    for (std::size_t i : search.best_set) {
        solution.assignments.push_back(flat.assignments[i]);
        solution.total_utility += flat.assignment_utility[i];
    }
    return solution;
}

/// Bound summary for one instance: the relaxation bound, optionally the
/// oracle optimum, and each solver's utility over the bound (1 when the
/// instance has no candidates at all).
struct BoundReport {
    double upper_bound = 0.0;
    std::optional<double> optimal;
    std::vector<std::pair<std::string, double>> ratios;
};

inline double performance_ratio(double utility, double bound) {
    return bound > 0.0 ? utility / bound : 1.0;
}

inline BoundReport make_bound_report(
    const FlatProblem& flat,
    const std::vector<std::pair<std::string, double>>& solver_utilities,
    std::optional<double> optimal = std::nullopt) {
    BoundReport report;
    report.upper_bound = upper_bound(flat);
    report.optimal = optimal;
    for (const auto& [name, utility] : solver_utilities)
        report.ratios.emplace_back(name, performance_ratio(utility, report.upper_bound));
    return report;
}

}  // namespace mrta
