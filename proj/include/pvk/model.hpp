#pragma once

#include "pvk/relation.hpp"
#include "pvk/vec.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pvk {

using StateId = int;
using EdgeId = int;

// An edge updates the counters by `update` after testing counters
// 1..zerotest (1-based) for zero at the source configuration.
struct Edge {
    StateId from = 0;
    StateId to = 0;
    Vec update;
    int zerotest = 0;
    EdgeId id = 0;
};

// Priority VASS: finite directed multigraph over `states` with per-edge
// update vector and zero-test level. Edge ids are stable small integers
// assigned in construction/file order.
struct Pvass {
    int dim = 0;
    std::vector<std::string> states;
    std::vector<Edge> edges;

    StateId add_state(const std::string& name) {
        states.push_back(name);
        return static_cast<StateId>(states.size() - 1);
    }
    EdgeId add_edge(StateId from, StateId to, Vec update, int zerotest) {
        Edge e;
        e.from = from;
        e.to = to;
        e.update = std::move(update);
        e.zerotest = zerotest;
        e.id = static_cast<EdgeId>(edges.size());
        edges.push_back(std::move(e));
        return edges.back().id;
    }
    StateId state_id(const std::string& name) const;
    int max_zerotest() const {
        int k = 0;
        for (const auto& e : edges) k = std::max(k, e.zerotest);
        return k;
    }
    bool is_vass() const { return max_zerotest() == 0; }
    // A normalized model never updates a counter it zero-tests.
    bool is_normalized() const {
        for (const auto& e : edges)
            for (int j = 0; j < e.zerotest && j < static_cast<int>(e.update.size()); ++j)
                if (e.update[j] != 0) return false;
        return true;
    }
};

struct Configuration {
    StateId state = 0;
    Vec counters;

    bool operator==(const Configuration& o) const {
        return state == o.state && counters == o.counters;
    }
    bool operator<(const Configuration& o) const {
        if (state != o.state) return state < o.state;
        return counters < o.counters;
    }
};

// A validated run: configs_[i] -> configs_[i+1] via edges_[i].
struct Run {
    std::vector<Configuration> configs;
    std::vector<EdgeId> edges;

    const Configuration& source() const { return configs.front(); }
    const Configuration& target() const { return configs.back(); }
    size_t steps() const { return edges.size(); }
    bool operator==(const Run& o) const { return configs == o.configs && edges == o.edges; }
    bool operator<(const Run& o) const {
        if (configs != o.configs) return configs < o.configs;
        return edges < o.edges;
    }
};

// A section denotes the relation on free (trailing) coordinates between two
// states, with the leading coordinates pinned to b_s at the source and b_t
// at the target.
struct Section {
    Pvass model;
    StateId p = 0;
    StateId q = 0;
    Vec bs;
    Vec bt;

    int free_in() const { return model.dim - static_cast<int>(bs.size()); }
    int free_out() const { return model.dim - static_cast<int>(bt.size()); }
};

std::vector<std::string> validate_model(const Pvass& m);

// Single-step semantics. Returns the successor configuration, or nullopt if
// the edge is not applicable at c. Unknown edge ids are an error.
std::optional<Configuration> step(const Pvass& m, const Configuration& c, EdgeId e);

enum class StepFailure { StateMismatch, Negativity, FailedZeroTest };

struct RunError : Error {
    RunError(size_t index, StepFailure reason, const std::string& msg)
        : Error(msg), index(index), reason(reason) {}
    size_t index;
    StepFailure reason;
};

// Executes `word` from `start`, validating every step; throws RunError with
// the failing index and reason on the first inapplicable edge.
Run run_from_word(const Pvass& m, const Configuration& start, const std::vector<EdgeId>& word);

bool validate_run(const Pvass& m, const Run& r);

// Brute-force reachability oracle: exactly the configurations reachable from
// `start` via runs whose every configuration has all counters <= bound.
// This under-approximates ->* ; all equivalence tests compare two such
// under-approximations at the same bound.
std::set<Configuration> reach_set_bounded(const Pvass& m, const Configuration& start,
                                          long long bound);

// Variant with one cap per counter, used where auxiliary counters (state
// encodings) need different headroom than data counters.
std::set<Configuration> reach_set_capped(const Pvass& m, const Configuration& start,
                                         const Vec& caps);

// All pairs (x, y) of free vectors with entries <= bound such that the
// bounded oracle connects (p,(b_s,x)) to (q,(b_t,y)).
BoundedRel section_eval_bounded(const Section& s, long long bound);

// All bounded runs (not just reachable configurations): every configuration
// <= bound, at most max_steps edges, from state p with the given fixed
// prefix, ending at state q with the target fixed prefix.
std::vector<Run> enumerate_section_runs(const Section& s, long long bound, size_t max_steps);

struct NormalizeOptions {
    bool zero_tests = true;
    bool eliminate_states = false;
};

// Zero-test normalization: every edge that updates a counter it tests is
// split through a fresh intermediate state; the first edge carries the test
// with a zero update, the second carries the update.
Pvass normalize_zero_tests(const Pvass& m);

// State elimination. Self-loops are first split through fresh states, then
// every state becomes a one-hot counter placed between the zero-tested
// prefix and the untested counters. Each edge becomes a single vector
// moving the one-hot token, so the bounded semantics is preserved exactly
// at every bound >= 1.
struct StateElimination {
    Pvass model;              // single-state
    int tested = 0;           // length of the zero-tested prefix kept in front
    int hot_count = 0;        // number of one-hot counters
    std::vector<StateId> hot_of_state; // original state -> hot counter index (0-based within hot block)

    // Maps a section over the original model; requires the original fixed
    // prefixes to cover the zero-tested counters.
    Section map_section(const Section& original) const;
    Vec encode_config(const Configuration& c) const;
};

StateElimination eliminate_states(const Pvass& m);

Pvass normalize(const Pvass& m, const NormalizeOptions& opts);

} // namespace pvk
