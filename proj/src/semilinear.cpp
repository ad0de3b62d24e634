#include "pvk/semilinear.hpp"

#include <algorithm>
#include <functional>

namespace pvk {

std::vector<std::string> validate_semilinear(const SemilinearSet& s) {
    std::vector<std::string> out;
    for (size_t i = 0; i < s.components.size(); ++i) {
        const LinearSet& l = s.components[i];
        std::string tag = "component " + std::to_string(i);
        if (!is_natural(l.base)) out.push_back(tag + ": base not natural");
        if (l.base.size() != s.dim()) out.push_back(tag + ": base dimension differs");
        for (const Vec& p : l.periods) {
            if (p.size() != l.base.size()) out.push_back(tag + ": period dimension differs");
            if (!is_natural(p)) out.push_back(tag + ": period not natural");
        }
    }
    return out;
}

SlMembership semilinear_membership(const SemilinearSet& s, const Vec& x) {
    if (!s.components.empty() && x.size() != s.dim())
        throw Error("semilinear_membership: dimension mismatch");
    for (size_t ci = 0; ci < s.components.size(); ++ci) {
        const LinearSet& l = s.components[ci];
        Vec rem = vec_sub(x, l.base);
        if (!is_natural(rem)) continue;
        std::vector<size_t> live; // periods with some nonzero entry
        for (size_t i = 0; i < l.periods.size(); ++i)
            if (vec_max_entry(l.periods[i]) > 0) live.push_back(i);
        std::vector<long long> coeff(l.periods.size(), 0);
        std::function<bool(size_t, Vec&)> dfs = [&](size_t i, Vec& r) -> bool {
            if (i == live.size()) return vec_max_entry(r) == 0 && is_natural(r);
            const Vec& p = l.periods[live[i]];
            long long hi = -1;
            for (size_t j = 0; j < p.size(); ++j)
                if (p[j] > 0) {
                    long long q = r[j] / p[j];
                    hi = hi < 0 ? q : std::min(hi, q);
                }
            for (long long n = 0; n <= hi; ++n) {
                Vec next = vec_sub(r, vec_scale(p, n));
                if (!is_natural(next)) break;
                coeff[live[i]] = n;
                if (dfs(i + 1, next)) return true;
            }
            coeff[live[i]] = 0;
            return false;
        };
        if (dfs(0, rem)) return {true, ci, coeff};
    }
    return {false, 0, {}};
}

bool lps_membership_bounded(const LinearPathScheme& s, const Vec& x, const Vec& y,
                            long long bound) {
    if (s.end_pairs.empty()) return x == y;
    size_t d = s.end_pairs.front().first.size();
    for (const auto& [a, b] : s.end_pairs)
        if (a.size() != d || b.size() != d)
            throw Error("lps_membership_bounded: factor dimensions do not chain");
    if (x.size() != d || y.size() != d)
        throw Error("lps_membership_bounded: query dimension mismatch");
    BoundedRel acc = BoundedRel::identity(d, bound);
    for (const auto& [a, b] : s.end_pairs) {
        BoundedRel lift(d, d);
        for (const Vec& u : enumerate_vectors(d, bound)) {
            Vec au = vec_add(a, u);
            Vec bu = vec_add(b, u);
            if (vec_within(au, bound) && vec_within(bu, bound)) lift.insert(au, bu);
        }
        acc = BoundedRel::compose(acc, BoundedRel::star(lift, bound));
    }
    return acc.contains(x, y);
}

// ---------------------------------------------------------------------------
// Transition-word flattability

namespace {

std::vector<Configuration> all_configs(const Pvass& m, long long bound) {
    std::vector<Configuration> out;
    for (StateId q = 0; q < static_cast<StateId>(m.states.size()); ++q)
        for (const Vec& v : enumerate_vectors(static_cast<size_t>(m.dim), bound))
            out.push_back(Configuration{q, v});
    return out;
}

std::optional<Configuration> apply_word_bounded(const Pvass& m, const Configuration& c,
                                                const std::vector<EdgeId>& w, long long bound) {
    Configuration cur = c;
    for (EdgeId e : w) {
        auto next = step(m, cur, e);
        if (!next || !vec_within(next->counters, bound)) return std::nullopt;
        cur = *next;
    }
    return cur;
}

ConfigRel closure(const Pvass& m, ConfigRel step_rel, long long bound) {
    ConfigRel r;
    for (const Configuration& c : all_configs(m, bound)) r.emplace(c, c);
    bool changed = true;
    while (changed) {
        changed = false;
        ConfigRel add;
        for (const auto& [a, b] : r)
            for (const auto& [c, d] : step_rel)
                if (b == c && !r.count({a, d})) add.emplace(a, d);
        for (const auto& p : add) r.insert(p);
        changed = !add.empty();
    }
    return r;
}

ConfigRel compose_config(const ConfigRel& a, const ConfigRel& b) {
    ConfigRel r;
    for (const auto& [x, m] : a)
        for (const auto& [m2, y] : b)
            if (m == m2) r.emplace(x, y);
    return r;
}

} // namespace

WordFlatVerdict word_flat_check(const Pvass& m, const FlatWitness& fw, const ConfigRel& r,
                                long long bound) {
    for (const auto& w : fw.words)
        for (EdgeId e : w)
            if (e < 0 || e >= static_cast<EdgeId>(m.edges.size()))
                throw Error("word_flat_check: unknown edge id " + std::to_string(e));
    ConfigRel acc;
    for (const Configuration& c : all_configs(m, bound)) acc.emplace(c, c);
    for (const auto& w : fw.words) {
        ConfigRel step_rel;
        for (const Configuration& c : all_configs(m, bound)) {
            auto t = apply_word_bounded(m, c, w, bound);
            if (t) step_rel.emplace(c, *t);
        }
        acc = compose_config(acc, closure(m, std::move(step_rel), bound));
    }
    for (const auto& p : r)
        if (!acc.count(p)) return {false, p};
    return {true, std::nullopt};
}

ConfigRel section_config_pairs(const Section& s, long long bound) {
    ConfigRel out;
    BoundedRel rel = section_eval_bounded(s, bound);
    for (const auto& [x, y] : rel.pairs())
        out.emplace(Configuration{s.p, concat(s.bs, x)}, Configuration{s.q, concat(s.bt, y)});
    return out;
}

// ---------------------------------------------------------------------------
// Intersection with a semilinear relation

Section intersect_section_semilinear(const Section& x, const SemilinearSet& s) {
    const Pvass& v = x.model;
    int d = v.dim;
    int din = x.free_in();
    int dout = x.free_out();
    if (d == 0) throw Error("intersect_section_semilinear: zero-dimensional model");
    if (!s.components.empty() && s.dim() != static_cast<size_t>(din + dout))
        throw Error("intersect_section_semilinear: semilinear set must live on the free pairs");

    // counter blocks: A = run space, A2 = input snapshot, M = component
    // accumulator (mirrors A2 then A), C = drained result
    const int A = 0, A2 = d, M = 2 * d, C = 4 * d;
    Pvass m;
    m.dim = 6 * d;
    auto wide = [&](int block, const Vec& val, int offset = 0) {
        Vec r(m.dim, 0);
        for (size_t i = 0; i < val.size(); ++i) r[block + offset + static_cast<int>(i)] = val[i];
        return r;
    };

    StateId guess = m.add_state("guess");
    for (const std::string& name : v.states) m.add_state("v_" + name);
    auto vstate = [&](StateId q) { return q + 1; };

    // guess (x, x) on the free coordinates of run space and snapshot
    for (int i = d - din; i < d; ++i) {
        Vec u(m.dim, 0);
        u[A + i] = 1;
        u[A2 + i] = 1;
        m.add_edge(guess, guess, std::move(u), 0);
    }
    // enter the model with both fixed prefixes installed
    m.add_edge(guess, vstate(x.p), vec_add(wide(A, x.bs), wide(A2, x.bs)), 0);
    for (const Edge& e : v.edges)
        m.add_edge(vstate(e.from), vstate(e.to), wide(A, e.update), e.zerotest);

    // one accumulator state per component: base on entry, periods as loops
    StateId drain0 = -1;
    {
        std::vector<StateId> comp_states;
        for (size_t ci = 0; ci < s.components.size(); ++ci)
            comp_states.push_back(m.add_state("acc" + std::to_string(ci)));
        std::vector<StateId> drains;
        for (int j = 0; j < 2 * d; ++j) drains.push_back(m.add_state("eq" + std::to_string(j)));
        drain0 = drains.front();
        for (size_t ci = 0; ci < s.components.size(); ++ci) {
            const LinearSet& l = s.components[ci];
            auto lift_pair = [&](const Vec& pvec, bool with_fixed) {
                // semilinear vectors are (free-in # free-out); the M block
                // mirrors the full snapshot and run space
                Vec in_part = prefix(pvec, static_cast<size_t>(din));
                Vec out_part = suffix(pvec, static_cast<size_t>(dout));
                Vec r = vec_add(wide(M, in_part, d - din), wide(M + d, out_part, d - dout));
                if (with_fixed) r = vec_add(r, vec_add(wide(M, x.bs), wide(M + d, x.bt)));
                return r;
            };
            m.add_edge(vstate(x.q), comp_states[ci], lift_pair(l.base, true), 0);
            for (const Vec& p : l.periods)
                m.add_edge(comp_states[ci], comp_states[ci], lift_pair(p, false), 0);
            m.add_edge(comp_states[ci], drains.front(), zeros(m.dim), 0);
        }
        // drain matching pairs in fixed coordinate order: snapshot against
        // the first M half, then run space against the second
        for (int j = 0; j < 2 * d; ++j) {
            Vec u(m.dim, 0);
            u[(j < d ? A2 + j : A + (j - d))] = -1;
            u[M + j] = -1;
            u[C + j] = 1;
            m.add_edge(drains[j], drains[j], std::move(u), 0);
            if (j + 1 < 2 * d) m.add_edge(drains[j], drains[j + 1], zeros(m.dim), 0);
        }
    }

    Section out;
    out.p = guess;
    out.q = drain0 + 2 * d - 1;
    out.bs = zeros(static_cast<size_t>(m.dim));
    // pinned: run space, snapshot and accumulator fully drained, then the
    // fixed input prefix of the result block; free: (x, b_t, y)
    out.bt = concat(zeros(static_cast<size_t>(4 * d)), x.bs);
    out.model = std::move(m);
    return out;
}

BoundedRel intersection_relation_bounded(const Section& x, const SemilinearSet& s,
                                         long long bound) {
    Section machine = intersect_section_semilinear(x, s);
    BoundedRel raw = section_eval_bounded(machine, bound);
    size_t din = static_cast<size_t>(x.free_in());
    size_t dout = static_cast<size_t>(x.free_out());
    BoundedRel out(din, dout);
    for (const auto& [unused, w] : raw.pairs()) {
        (void)unused;
        Vec in = prefix(w, din);
        Vec mid = slice(w, din, w.size() - din - dout);
        Vec yv = suffix(w, dout);
        if (mid != x.bt)
            throw Error("intersection_relation_bounded: result block lost the fixed suffix");
        out.insert(in, yv);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Inductive invariants and separators

Vec encode_configuration(const Pvass& m, const Configuration& c) {
    Vec hot(m.states.size(), 0);
    hot[c.state] = 1;
    return concat(hot, c.counters);
}

InvariantVerdict inductive_invariant_check(const Pvass& m, const SemilinearSet& s,
                                           long long bound) {
    for (StateId q = 0; q < static_cast<StateId>(m.states.size()); ++q) {
        for (const Vec& v : enumerate_vectors(static_cast<size_t>(m.dim), bound)) {
            Configuration c{q, v};
            if (!semilinear_membership(s, encode_configuration(m, c)).member) continue;
            for (const Edge& e : m.edges) {
                if (e.from != q) continue;
                auto next = step(m, c, e.id);
                if (!next) continue;
                if (!semilinear_membership(s, encode_configuration(m, *next)).member)
                    return {false, std::make_pair(c, e.id)};
            }
        }
    }
    return {true, std::nullopt};
}

SeparatorVerdict separator_check(const Pvass& m, const SemilinearSet& s,
                                 const Configuration& c_s, const Configuration& c_t,
                                 long long bound) {
    SeparatorVerdict v;
    v.source_in = semilinear_membership(s, encode_configuration(m, c_s)).member;
    v.target_out = !semilinear_membership(s, encode_configuration(m, c_t)).member;
    v.invariant = inductive_invariant_check(m, s, bound);
    return v;
}

} // namespace pvk
