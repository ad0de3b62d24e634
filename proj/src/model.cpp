#include "pvk/model.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace pvk {

StateId Pvass::state_id(const std::string& name) const {
    for (size_t i = 0; i < states.size(); ++i)
        if (states[i] == name) return static_cast<StateId>(i);
    throw Error("unknown state: " + name);
}

std::vector<std::string> validate_model(const Pvass& m) {
    std::vector<std::string> violations;
    if (m.dim < 0) violations.push_back("dim is negative");
    for (const auto& e : m.edges) {
        std::string tag = "edge " + std::to_string(e.id);
        if (e.from < 0 || e.from >= static_cast<StateId>(m.states.size()))
            violations.push_back(tag + ": unknown source state id " + std::to_string(e.from));
        if (e.to < 0 || e.to >= static_cast<StateId>(m.states.size()))
            violations.push_back(tag + ": unknown target state id " + std::to_string(e.to));
        if (static_cast<int>(e.update.size()) != m.dim)
            violations.push_back(tag + ": update vector has length " +
                                 std::to_string(e.update.size()) + ", expected " +
                                 std::to_string(m.dim));
        if (e.zerotest < 0 || e.zerotest > m.dim)
            violations.push_back(tag + ": zerotest level " + std::to_string(e.zerotest) +
                                 " outside 0.." + std::to_string(m.dim));
    }
    std::set<EdgeId> seen;
    for (const auto& e : m.edges)
        if (!seen.insert(e.id).second)
            violations.push_back("duplicate edge id " + std::to_string(e.id));
    return violations;
}

std::optional<Configuration> step(const Pvass& m, const Configuration& c, EdgeId e) {
    if (e < 0 || e >= static_cast<EdgeId>(m.edges.size()))
        throw Error("step: unknown edge id " + std::to_string(e));
    const Edge& edge = m.edges[e];
    if (c.state != edge.from) return std::nullopt;
    for (int j = 0; j < edge.zerotest; ++j)
        if (c.counters[j] != 0) return std::nullopt;
    Vec next = vec_add(c.counters, edge.update);
    if (!is_natural(next)) return std::nullopt;
    return Configuration{edge.to, std::move(next)};
}

Run run_from_word(const Pvass& m, const Configuration& start, const std::vector<EdgeId>& word) {
    Run r;
    r.configs.push_back(start);
    for (size_t i = 0; i < word.size(); ++i) {
        EdgeId id = word[i];
        if (id < 0 || id >= static_cast<EdgeId>(m.edges.size()))
            throw Error("run_from_word: unknown edge id " + std::to_string(id));
        const Edge& edge = m.edges[id];
        const Configuration& cur = r.configs.back();
        if (cur.state != edge.from)
            throw RunError(i, StepFailure::StateMismatch,
                           "run_from_word: step " + std::to_string(i) + ": state mismatch (at " +
                               m.states[cur.state] + ", edge leaves " + m.states[edge.from] + ")");
        for (int j = 0; j < edge.zerotest; ++j)
            if (cur.counters[j] != 0)
                throw RunError(i, StepFailure::FailedZeroTest,
                               "run_from_word: step " + std::to_string(i) +
                                   ": failed zero test at counter " + std::to_string(j + 1));
        Vec next = vec_add(cur.counters, edge.update);
        if (!is_natural(next))
            throw RunError(i, StepFailure::Negativity,
                           "run_from_word: step " + std::to_string(i) + ": counter goes negative");
        r.configs.push_back(Configuration{edge.to, std::move(next)});
        r.edges.push_back(id);
    }
    return r;
}

bool validate_run(const Pvass& m, const Run& r) {
    if (r.configs.empty()) return false;
    if (r.edges.size() + 1 != r.configs.size()) return false;
    for (const auto& c : r.configs)
        if (static_cast<int>(c.counters.size()) != m.dim || !is_natural(c.counters)) return false;
    for (size_t i = 0; i < r.edges.size(); ++i) {
        if (r.edges[i] < 0 || r.edges[i] >= static_cast<EdgeId>(m.edges.size())) return false;
        auto next = step(m, r.configs[i], r.edges[i]);
        if (!next || !(*next == r.configs[i + 1])) return false;
    }
    return true;
}

std::set<Configuration> reach_set_capped(const Pvass& m, const Configuration& start,
                                         const Vec& caps) {
    if (static_cast<int>(caps.size()) != m.dim)
        throw Error("reach_set_capped: cap vector has wrong dimension");
    std::set<Configuration> seen;
    if (!vec_leq(start.counters, caps))
        throw Error("reach oracle: start exceeds bound");
    std::deque<Configuration> frontier;
    seen.insert(start);
    frontier.push_back(start);
    while (!frontier.empty()) {
        Configuration cur = frontier.front();
        frontier.pop_front();
        for (const Edge& e : m.edges) {
            if (e.from != cur.state) continue;
            auto next = step(m, cur, e.id);
            if (!next) continue;
            if (!vec_leq(next->counters, caps)) continue;
            if (seen.insert(*next).second) frontier.push_back(*next);
        }
    }
    return seen;
}

std::set<Configuration> reach_set_bounded(const Pvass& m, const Configuration& start,
                                          long long bound) {
    return reach_set_capped(m, start, Vec(m.dim, bound));
}

BoundedRel section_eval_bounded(const Section& s, long long bound) {
    const Pvass& m = s.model;
    if (static_cast<int>(s.bs.size()) > m.dim || static_cast<int>(s.bt.size()) > m.dim)
        throw Error("section_eval_bounded: fixed prefix longer than dimension");
    if (vec_max_entry(s.bs) > bound || vec_max_entry(s.bt) > bound)
        throw Error("section_eval_bounded: bound below fixed-prefix entries");
    size_t din = static_cast<size_t>(s.free_in());
    size_t dout = static_cast<size_t>(s.free_out());
    BoundedRel rel(din, dout);
    for (const Vec& x : enumerate_vectors(din, bound)) {
        Configuration start{s.p, concat(s.bs, x)};
        auto reach = reach_set_bounded(m, start, bound);
        for (const Configuration& c : reach) {
            if (c.state != s.q) continue;
            if (prefix(c.counters, s.bt.size()) != s.bt) continue;
            rel.insert(x, suffix(c.counters, dout));
        }
    }
    return rel;
}

std::vector<Run> enumerate_section_runs(const Section& s, long long bound, size_t max_steps) {
    const Pvass& m = s.model;
    std::vector<Run> out;
    if (vec_max_entry(s.bs) > bound || vec_max_entry(s.bt) > bound) return out;
    size_t din = static_cast<size_t>(s.free_in());
    Run cur;
    auto matches_target = [&](const Configuration& c) {
        return c.state == s.q && prefix(c.counters, s.bt.size()) == s.bt;
    };
    std::function<void()> dfs = [&]() {
        if (matches_target(cur.configs.back())) out.push_back(cur);
        if (cur.edges.size() >= max_steps) return;
        for (const Edge& e : m.edges) {
            if (e.from != cur.configs.back().state) continue;
            auto next = step(m, cur.configs.back(), e.id);
            if (!next || !vec_within(next->counters, bound)) continue;
            cur.configs.push_back(*next);
            cur.edges.push_back(e.id);
            dfs();
            cur.configs.pop_back();
            cur.edges.pop_back();
        }
    };
    for (const Vec& x : enumerate_vectors(din, bound)) {
        cur.configs.assign(1, Configuration{s.p, concat(s.bs, x)});
        cur.edges.clear();
        dfs();
    }
    std::sort(out.begin(), out.end());
    return out;
}

Pvass normalize_zero_tests(const Pvass& m) {
    Pvass out;
    out.dim = m.dim;
    out.states = m.states;
    for (const Edge& e : m.edges) {
        bool touches_tested = false;
        for (int j = 0; j < e.zerotest; ++j)
            if (e.update[j] != 0) touches_tested = true;
        if (!touches_tested) {
            out.add_edge(e.from, e.to, e.update, e.zerotest);
            continue;
        }
        StateId mid = out.add_state("n" + std::to_string(e.id) + "_" + m.states[e.from]);
        out.add_edge(e.from, mid, zeros(m.dim), e.zerotest);
        out.add_edge(mid, e.to, e.update, 0);
    }
    return out;
}

static Pvass split_self_loops(const Pvass& m) {
    Pvass out;
    out.dim = m.dim;
    out.states = m.states;
    for (const Edge& e : m.edges) {
        if (e.from != e.to) {
            out.add_edge(e.from, e.to, e.update, e.zerotest);
            continue;
        }
        StateId mid = out.add_state("r" + std::to_string(e.id) + "_" + m.states[e.from]);
        out.add_edge(e.from, mid, e.update, e.zerotest);
        out.add_edge(mid, e.to, zeros(m.dim), 0);
    }
    return out;
}

StateElimination eliminate_states(const Pvass& m) {
    Pvass base = split_self_loops(m);
    int k = base.max_zerotest();
    int hot = static_cast<int>(base.states.size());
    StateElimination elim;
    elim.tested = k;
    elim.hot_count = hot;
    elim.hot_of_state.resize(m.states.size());
    for (size_t i = 0; i < m.states.size(); ++i) elim.hot_of_state[i] = static_cast<StateId>(i);

    Pvass& out = elim.model;
    out.dim = base.dim + hot;
    out.add_state("s");
    // counter layout: [tested 1..k][one-hot per state][untested k+1..d]
    auto lift = [&](const Vec& v, StateId from, StateId to) {
        Vec r(out.dim, 0);
        for (int j = 0; j < k; ++j) r[j] = v[j];
        for (int j = k; j < base.dim; ++j) r[hot + j] = v[j];
        r[k + from] -= 1;
        r[k + to] += 1;
        return r;
    };
    for (const Edge& e : base.edges)
        out.add_edge(0, 0, lift(e.update, e.from, e.to), e.zerotest);
    return elim;
}

Vec StateElimination::encode_config(const Configuration& c) const {
    Vec r(model.dim, 0);
    int k = tested;
    for (int j = 0; j < k; ++j) r[j] = c.counters[j];
    for (size_t j = k; j < c.counters.size(); ++j) r[hot_count + j] = c.counters[j];
    r[k + hot_of_state[c.state]] = 1;
    return r;
}

Section StateElimination::map_section(const Section& original) const {
    if (static_cast<int>(original.bs.size()) < tested ||
        static_cast<int>(original.bt.size()) < tested)
        throw Error("eliminate_states: section must fix at least the zero-tested prefix");
    auto map_fixed = [&](const Vec& b, StateId st) {
        Vec r;
        for (int j = 0; j < tested; ++j) r.push_back(b[j]);
        Vec hotvec(hot_count, 0);
        hotvec[hot_of_state[st]] = 1;
        r = concat(r, hotvec);
        for (size_t j = tested; j < b.size(); ++j) r.push_back(b[j]);
        return r;
    };
    Section s;
    s.model = model;
    s.p = 0;
    s.q = 0;
    s.bs = map_fixed(original.bs, original.p);
    s.bt = map_fixed(original.bt, original.q);
    return s;
}

Pvass normalize(const Pvass& m, const NormalizeOptions& opts) {
    Pvass cur = m;
    if (opts.zero_tests) cur = normalize_zero_tests(cur);
    if (opts.eliminate_states) cur = eliminate_states(cur).model;
    return cur;
}

} // namespace pvk
