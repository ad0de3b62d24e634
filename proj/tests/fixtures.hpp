#pragma once

#include "pvk/expr.hpp"
#include "pvk/model.hpp"

#include <random>

namespace pvk::fixtures {

// Four states in a cycle; x is climbed at q_1, traded for y at q_2, z
// counts completed passes, and the back edge requires x == 0.
// Coordinates: (x, y, z); edge ids 0..5 in construction order.
inline Pvass fig1_left() {
    Pvass m;
    m.dim = 3;
    StateId qs = m.add_state("q_s");
    StateId q1 = m.add_state("q_1");
    StateId q2 = m.add_state("q_2");
    StateId qt = m.add_state("q_t");
    m.add_edge(qs, q1, {0, 0, 0}, 0);  // e0
    m.add_edge(q1, q1, {1, 0, 0}, 0);  // e1: x++
    m.add_edge(q1, q2, {0, 0, 0}, 0);  // e2
    m.add_edge(q2, q2, {-1, 1, 0}, 0); // e3: x--; y++
    m.add_edge(q2, qt, {0, 0, 1}, 0);  // e4: z++
    m.add_edge(qt, qs, {0, 0, 0}, 1);  // e5: x == 0
    return m;
}

// The flattened companion: an outer cycle without inner loops feeding a
// second copy that keeps the self-loops but has no back edge.
inline Pvass fig1_right() {
    Pvass m;
    m.dim = 3;
    StateId qs = m.add_state("q_s");
    StateId q1 = m.add_state("q_1");
    StateId q2 = m.add_state("q_2");
    StateId qt = m.add_state("q_t");
    StateId qs2 = m.add_state("q_s'");
    StateId q12 = m.add_state("q_1'");
    StateId q22 = m.add_state("q_2'");
    StateId qt2 = m.add_state("q_t'");
    m.add_edge(qs, q1, {0, 0, 0}, 0);    // e0
    m.add_edge(q1, q2, {0, 0, 0}, 0);    // e1
    m.add_edge(q2, qt, {0, 0, 1}, 0);    // e2: z++
    m.add_edge(qt, qs, {0, 0, 0}, 1);    // e3: x == 0
    m.add_edge(qt, qs2, {0, 0, 0}, 1);   // e4: x == 0
    m.add_edge(qs2, q12, {0, 0, 0}, 0);  // e5
    m.add_edge(q12, q12, {1, 0, 0}, 0);  // e6: x++
    m.add_edge(q12, q22, {0, 0, 0}, 0);  // e7
    m.add_edge(q22, q22, {-1, 1, 0}, 0); // e8: x--; y++
    m.add_edge(q22, qt2, {0, 0, 1}, 0);  // e9: z++
    return m;
}

// The classic non-semilinear VAS used for the run-ordering example.
inline Pvass fig2_model() {
    Pvass m;
    m.dim = 3;
    StateId q = m.add_state("q");
    StateId p = m.add_state("p");
    m.add_edge(q, q, {0, 1, -1}, 0); // e0: loop at q
    m.add_edge(p, p, {0, -1, 2}, 0); // e1: loop at p
    m.add_edge(q, p, {1, 0, 0}, 0);  // e2
    m.add_edge(p, q, {0, 0, 0}, 0);  // e3
    return m;
}

// One counter, increment and decrement.
inline Pvass incdec1() {
    Pvass m;
    m.dim = 1;
    StateId s = m.add_state("s");
    m.add_edge(s, s, {1}, 0);
    m.add_edge(s, s, {-1}, 0);
    return m;
}

inline Pvass edgeless(int dim) {
    Pvass m;
    m.dim = dim;
    m.add_state("s");
    return m;
}

inline Section make_section(Pvass m, const std::string& p, const std::string& q, Vec bs, Vec bt) {
    Section s;
    s.p = m.state_id(p);
    s.q = m.state_id(q);
    s.model = std::move(m);
    s.bs = std::move(bs);
    s.bt = std::move(bt);
    return s;
}

inline std::mt19937_64 seeded_rng(uint64_t salt = 0) {
    uint64_t seed = 0xC0FFEE;
    if (const char* env = std::getenv("PVASSKIT_SEED")) seed = std::strtoull(env, nullptr, 0);
    return std::mt19937_64(seed ^ salt);
}

// Random normalized single-state PVAS with small updates.
inline Pvass random_pvas(std::mt19937_64& rng, int dim, int max_edges, int max_zerotest) {
    Pvass m;
    m.dim = dim;
    m.add_state("s");
    std::uniform_int_distribution<int> nedges(1, max_edges);
    std::uniform_int_distribution<int> upd(-1, 1);
    std::uniform_int_distribution<int> zt(0, max_zerotest);
    int n = nedges(rng);
    for (int i = 0; i < n; ++i) {
        int g = std::min(zt(rng), dim);
        Vec v(dim);
        for (int j = 0; j < dim; ++j) v[j] = j < g ? 0 : upd(rng);
        m.add_edge(0, 0, std::move(v), g);
    }
    return m;
}

// Random VASS (no zero tests) over a few states.
inline Pvass random_vass(std::mt19937_64& rng, int dim, int max_states, int max_edges) {
    Pvass m;
    m.dim = dim;
    std::uniform_int_distribution<int> nstates(1, max_states);
    int ns = nstates(rng);
    for (int i = 0; i < ns; ++i) m.add_state("s" + std::to_string(i));
    std::uniform_int_distribution<int> nedges(1, max_edges);
    std::uniform_int_distribution<int> st(0, ns - 1);
    std::uniform_int_distribution<int> upd(-1, 1);
    int n = nedges(rng);
    for (int i = 0; i < n; ++i) {
        Vec v(dim);
        for (int j = 0; j < dim; ++j) v[j] = upd(rng);
        m.add_edge(st(rng), st(rng), std::move(v), 0);
    }
    return m;
}

// Random leaf with the requested free dimensions; fixed entries are 0 or 1.
inline Expression random_leaf(std::mt19937_64& rng, int din, int dout) {
    std::uniform_int_distribution<int> extra(0, 1);
    int dim = std::max(din, dout) + extra(rng);
    Pvass m = random_vass(rng, dim, 2, 3);
    std::uniform_int_distribution<int> bit(0, 1);
    Vec bs, bt;
    for (int i = 0; i < dim - din; ++i) bs.push_back(bit(rng));
    for (int i = 0; i < dim - dout; ++i) bt.push_back(bit(rng));
    std::uniform_int_distribution<int> st(0, static_cast<int>(m.states.size()) - 1);
    Section s;
    s.p = st(rng);
    s.q = st(rng);
    s.model = std::move(m);
    s.bs = std::move(bs);
    s.bt = std::move(bt);
    return Expression::leaf(std::move(s));
}

// Random expression with the requested interface dimensions.
inline Expression random_expression(std::mt19937_64& rng, int din, int dout, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 0 : (din == dout ? 3 : 2));
    switch (pick(rng)) {
    case 1: {
        std::uniform_int_distribution<int> mid(1, 2);
        int dmid = mid(rng);
        return Expression::comp(random_expression(rng, din, dmid, depth - 1),
                                random_expression(rng, dmid, dout, depth - 1));
    }
    case 2:
        return Expression::union_of(random_expression(rng, din, dout, depth - 1),
                                    random_expression(rng, din, dout, depth - 1));
    case 3:
        return Expression::star(random_expression(rng, din, din, depth - 1));
    default:
        return random_leaf(rng, din, dout);
    }
}

} // namespace pvk::fixtures
