#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mrta/core.hpp"
#include "mrta/instance_gen.hpp"
#include "mrta/solvers.hpp"

namespace mrta {

/// Schema violation while reading JSON input. The pointer locates the
/// offending element (RFC 6901).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string pointer, const std::string& message)
        : std::runtime_error(pointer.empty() ? message : pointer + ": " + message),
          pointer_(std::move(pointer)) {}

    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

namespace detail {

using nlohmann::json;

inline const json& require_field(const json& j, const char* key, const std::string& ptr) {
    if (!j.is_object()) throw ParseError(ptr, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(ptr + "/" + key, "missing field");
    return *it;
}

inline double as_number(const json& j, const std::string& ptr) {
    if (!j.is_number()) throw ParseError(ptr, "expected a number");
    return j.get<double>();
}

inline int as_int(const json& j, const std::string& ptr) {
    if (!j.is_number_integer()) throw ParseError(ptr, "expected an integer");
    return j.get<int>();
}

inline bool as_bool(const json& j, const std::string& ptr) {
    if (!j.is_boolean()) throw ParseError(ptr, "expected a boolean");
    return j.get<bool>();
}

inline const json& as_array(const json& j, const std::string& ptr) {
    if (!j.is_array()) throw ParseError(ptr, "expected an array");
    return j;
}

inline CapabilityVector capability_vector_from_json(const json& j, std::size_t expected_len,
                                                    const std::string& ptr) {
    as_array(j, ptr);
    if (j.size() != expected_len)
        throw ParseError(ptr, "expected " + std::to_string(expected_len) + " entries, got " +
                                  std::to_string(j.size()));
    CapabilityVector v;
    v.values.reserve(expected_len);
    for (std::size_t i = 0; i < j.size(); ++i) {
        const double x = as_number(j[i], ptr + "/" + std::to_string(i));
        if (x < 0.0) throw ParseError(ptr + "/" + std::to_string(i), "negative value");
        v.values.push_back(x);
    }
    return v;
}

}  // namespace detail

inline Problem problem_from_json(const nlohmann::json& j) {
    using detail::as_array;
    using detail::as_int;
    using detail::as_number;
    using detail::require_field;

    const int H = as_int(require_field(j, "H", ""), "/H");
    if (H < 0) throw ParseError("/H", "must be >= 0");
    const auto Hs = static_cast<std::size_t>(H);

    Problem p;
    p.max_coalition_size = as_int(require_field(j, "k", ""), "/k");
    p.capability_costs = detail::capability_vector_from_json(
        require_field(j, "capability_costs", ""), Hs, "/capability_costs");

    const auto& robots = as_array(require_field(j, "robots", ""), "/robots");
    for (std::size_t i = 0; i < robots.size(); ++i) {
        const std::string ptr = "/robots/" + std::to_string(i);
        const auto& rj = robots[i];
        const int id = as_int(require_field(rj, "id", ptr), ptr + "/id");
        if (id != static_cast<int>(i))
            throw ParseError(ptr + "/id", "robot ids must be 0..N-1 in order");
        p.robots.push_back(Robot{
            id, detail::capability_vector_from_json(require_field(rj, "capabilities", ptr), Hs,
                                                    ptr + "/capabilities")});
    }

    const auto& tasks = as_array(require_field(j, "tasks", ""), "/tasks");
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        const std::string ptr = "/tasks/" + std::to_string(k);
        const auto& tj = tasks[k];
        Task t;
        t.id = as_int(require_field(tj, "id", ptr), ptr + "/id");
        if (t.id != static_cast<int>(k))
            throw ParseError(ptr + "/id", "task ids must be 0..N-1 in order");
        t.reward = as_number(require_field(tj, "reward", ptr), ptr + "/reward");
        if (t.reward <= 0.0) throw ParseError(ptr + "/reward", "must be positive");
        const auto& cfgs = as_array(require_field(tj, "configurations", ptr), ptr + "/configurations");
        if (cfgs.empty()) throw ParseError(ptr + "/configurations", "must be non-empty");
        for (std::size_t c = 0; c < cfgs.size(); ++c)
            t.configurations.push_back(TaskConfiguration{detail::capability_vector_from_json(
                cfgs[c], Hs, ptr + "/configurations/" + std::to_string(c))});
        p.tasks.push_back(std::move(t));
    }

    const auto& cm = require_field(j, "cost_model", "");
    const auto& kind = require_field(cm, "kind", "/cost_model");
    if (!kind.is_string()) throw ParseError("/cost_model/kind", "expected a string");
    const std::string kind_s = kind.get<std::string>();
    if (kind_s == "linear") {
        p.cost_model = CostModel::linear(as_number(
            require_field(cm, "coefficient", "/cost_model"), "/cost_model/coefficient"));
    } else if (kind_s == "zero") {
        p.cost_model = CostModel::zero();
    } else {
        throw ParseError("/cost_model/kind", "expected \"linear\" or \"zero\"");
    }

    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError("", e.what());
    }
    return p;
}

inline nlohmann::json problem_to_json(const Problem& p) {
    nlohmann::json j;
    j["H"] = static_cast<int>(p.num_capabilities());
    j["k"] = p.max_coalition_size;
    j["capability_costs"] = p.capability_costs.values;
    auto& robots = j["robots"] = nlohmann::json::array();
    for (const Robot& r : p.robots)
        robots.push_back({{"id", r.id}, {"capabilities", r.capabilities.values}});
    auto& tasks = j["tasks"] = nlohmann::json::array();
    for (const Task& t : p.tasks) {
        nlohmann::json cfgs = nlohmann::json::array();
        for (const auto& cfg : t.configurations) cfgs.push_back(cfg.requirements.values);
        tasks.push_back({{"id", t.id}, {"reward", t.reward}, {"configurations", std::move(cfgs)}});
    }
    switch (p.cost_model.kind()) {
        case CostModel::Kind::Linear:
            j["cost_model"] = {{"kind", "linear"}, {"coefficient", p.cost_model.coefficient()}};
            break;
        case CostModel::Kind::Zero:
            j["cost_model"] = {{"kind", "zero"}};
            break;
        case CostModel::Kind::Table:
            throw std::invalid_argument("table cost models have no JSON form");
    }
    return j;
}

inline nlohmann::json assignment_to_json(const Assignment& a) {
    return {{"task", a.task_id}, {"config", a.config_index}, {"coalition", a.coalition.members}};
}

inline nlohmann::json solver_result_to_json(const std::string& solver_name,
                                            const SolverResult& result,
                                            bool include_elapsed = true) {
    nlohmann::json j;
    j["solver"] = solver_name;
    j["utility"] = result.solution.total_utility;
    auto& assignments = j["assignments"] = nlohmann::json::array();
    for (const Assignment& a : result.solution.assignments)
        assignments.push_back(assignment_to_json(a));
    auto& steps = j["steps"] = nlohmann::json::array();
    for (const GreedyStep& s : result.steps) {
        nlohmann::json step = assignment_to_json(s.chosen);
        step["step"] = s.index;
        step["criterion"] = s.criterion;
        steps.push_back(std::move(step));
    }
    if (include_elapsed) j["elapsed_s"] = result.elapsed_s;
    return j;
}

/// Reads GenParams from an object; absent fields keep their defaults.
/// Ranges are two-element [lo, hi] arrays.
inline GenParams gen_params_from_json(const nlohmann::json& j, const std::string& ptr = "") {
    using detail::as_bool;
    using detail::as_int;
    using detail::as_number;

    if (!j.is_object()) throw ParseError(ptr, "expected an object");
    GenParams p;
    const auto range = [&](const char* key, double& lo, double& hi) {
        auto it = j.find(key);
        if (it == j.end()) return;
        const std::string rptr = ptr + "/" + key;
        detail::as_array(*it, rptr);
        if (it->size() != 2) throw ParseError(rptr, "expected [lo, hi]");
        lo = as_number((*it)[0], rptr + "/0");
        hi = as_number((*it)[1], rptr + "/1");
    };

    if (auto it = j.find("num_robots"); it != j.end()) p.num_robots = as_int(*it, ptr + "/num_robots");
    if (auto it = j.find("num_tasks"); it != j.end()) p.num_tasks = as_int(*it, ptr + "/num_tasks");
    if (auto it = j.find("max_configs_per_task"); it != j.end())
        p.max_configs_per_task = as_int(*it, ptr + "/max_configs_per_task");
    if (auto it = j.find("H"); it != j.end()) p.num_capabilities = as_int(*it, ptr + "/H");
    if (auto it = j.find("k"); it != j.end()) p.max_coalition_size = as_int(*it, ptr + "/k");
    if (auto it = j.find("capability_presence_prob"); it != j.end())
        p.capability_presence_prob = as_number(*it, ptr + "/capability_presence_prob");
    range("capability_range", p.capability_lo, p.capability_hi);
    range("cost_range", p.cost_lo, p.cost_hi);
    range("reward_range", p.reward_lo, p.reward_hi);
    if (auto it = j.find("cost_coefficient"); it != j.end())
        p.cost_coefficient = as_number(*it, ptr + "/cost_coefficient");
    if (auto it = j.find("integer_capabilities"); it != j.end())
        p.integer_capabilities = as_bool(*it, ptr + "/integer_capabilities");
    if (auto it = j.find("fixed_config_count"); it != j.end())
        p.fixed_config_count = as_bool(*it, ptr + "/fixed_config_count");
    if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_integer()) throw ParseError(ptr + "/seed", "expected an integer");
        p.seed = it->get<std::uint64_t>();
    }

    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(ptr, e.what());
    }
    return p;
}

inline nlohmann::json gen_params_to_json(const GenParams& p) {
    return {{"num_robots", p.num_robots},
            {"num_tasks", p.num_tasks},
            {"max_configs_per_task", p.max_configs_per_task},
            {"H", p.num_capabilities},
            {"k", p.max_coalition_size},
            {"capability_presence_prob", p.capability_presence_prob},
            {"capability_range", {p.capability_lo, p.capability_hi}},
            {"cost_range", {p.cost_lo, p.cost_hi}},
            {"reward_range", {p.reward_lo, p.reward_hi}},
            {"cost_coefficient", p.cost_coefficient},
            {"integer_capabilities", p.integer_capabilities},
            {"fixed_config_count", p.fixed_config_count},
            {"seed", p.seed}};
}

}  // namespace mrta
