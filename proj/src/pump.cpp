#include "pvk/pump.hpp"

#include <algorithm>
#include <sstream>

namespace pvk {

PumpPair make_pump_pair(const Expression& e, const ExprRun& base, const ExprRun& bigger) {
    RunOrderVerdict v = run_leq(e, base, bigger);
    if (!v.leq) throw Error("make_pump_pair: runs are not comparable (base must embed)");
    PumpPair pp;
    pp.base = base;
    pp.bigger = bigger;
    pp.delta = {vec_sub(bigger.src, base.src), vec_sub(bigger.tgt, base.tgt)};
    pp.embedding = *v.embedding;
    return pp;
}

namespace {

// Adds u to the trailing |u| coordinates of v.
Vec shift_trailing(const Vec& v, const Vec& u) {
    if (u.size() > v.size()) throw Error("pump_run: shift wider than vector");
    Vec r = v;
    size_t off = v.size() - u.size();
    for (size_t i = 0; i < u.size(); ++i) r[off + i] += u[i];
    return r;
}

// The monotone lift: shifts every end vector and leaf configuration by u on
// the trailing coordinates. Sound when every node dimension under the run
// is at least |u| (the Lemma-2 star criterion).
ExprRun shift_run(const ExprRun& r, const Vec& u) {
    ExprRun out = r;
    out.src = shift_trailing(r.src, u);
    out.tgt = shift_trailing(r.tgt, u);
    if (r.kind == ExprKind::Leaf) {
        for (auto& c : out.leaf_run.configs) c.counters = shift_trailing(c.counters, u);
    } else {
        for (auto& c : out.children) c = shift_run(c, u);
    }
    return out;
}

ExprRun pump_node(const Expression& e, const ExprRun& base, const ExprRun& bigger,
                  const RunEmbedding& emb, long long n);

ExprRun pump_leaf(const Expression& e, const ExprRun& base, const ExprRun& bigger,
                  const RunEmbedding& emb, long long n) {
    const ExprNode& nd = e.node(base.node);
    const Pvass& m = nd.section.model;
    const std::vector<EdgeId>& wbig = bigger.leaf_run.edges;
    size_t r = base.leaf_run.edges.size();

    // bigger's word as v_0 a_1 v_1 ... a_r v_r around the matched letters
    std::vector<EdgeId> word;
    size_t pos = 0;
    auto repeat_block = [&](size_t from, size_t to) {
        for (long long copy = 0; copy < n; ++copy)
            for (size_t j = from; j < to; ++j) word.push_back(wbig[j]);
    };
    for (size_t i = 0; i < r; ++i) {
        size_t fi = emb.word_map[i];
        repeat_block(pos, fi);
        word.push_back(wbig[fi]);
        pos = fi + 1;
    }
    repeat_block(pos, wbig.size());

    Vec dsrc = vec_sub(bigger.leaf_run.source().counters, base.leaf_run.source().counters);
    Configuration start{base.leaf_run.source().state,
                        vec_add(base.leaf_run.source().counters, vec_scale(dsrc, n))};
    Run run = run_from_word(m, start, word);

    ExprRun out;
    out.node = base.node;
    out.kind = ExprKind::Leaf;
    out.leaf_run = std::move(run);
    out.src = suffix(out.leaf_run.source().counters, nd.section.free_in());
    out.tgt = suffix(out.leaf_run.target().counters, nd.section.free_out());
    return out;
}

ExprRun pump_star(const Expression& e, const ExprRun& base, const ExprRun& bigger,
                  const RunEmbedding& emb, long long n) {
    size_t r = base.children.size();
    std::vector<ExprRun> segments;

    // shifted copies of the inserted block bigger.children[from, to), moving
    // the boundary from n*w to n*v along the monotone lift
    auto emit_block = [&](size_t from, size_t to, const Vec& w, const Vec& v) {
        for (long long copy = 1; copy <= n; ++copy) {
            Vec u = vec_add(vec_scale(w, n - copy), vec_scale(v, copy - 1));
            for (size_t j = from; j < to; ++j)
                segments.push_back(shift_run(bigger.children[j], u));
        }
    };

    Vec w_prev = vec_sub(bigger.src, base.src); // shift entering the current cut
    size_t pos = 0;
    for (size_t i = 0; i < r; ++i) {
        size_t fi = emb.segment_map[i];
        Vec v_i = vec_sub(bigger.children[fi].src, base.children[i].src);
        emit_block(pos, fi, w_prev, v_i);
        segments.push_back(pump_node(e, base.children[i], bigger.children[fi], emb.children[i], n));
        w_prev = vec_sub(bigger.children[fi].tgt, base.children[i].tgt);
        pos = fi + 1;
    }
    Vec v_last = vec_sub(bigger.tgt, base.tgt);
    emit_block(pos, bigger.children.size(), w_prev, v_last);

    ExprRun out;
    out.node = base.node;
    out.kind = ExprKind::Star;
    out.src = vec_add(base.src, vec_scale(vec_sub(bigger.src, base.src), n));
    out.tgt = vec_add(base.tgt, vec_scale(vec_sub(bigger.tgt, base.tgt), n));
    out.children = std::move(segments);
    return out;
}

ExprRun pump_node(const Expression& e, const ExprRun& base, const ExprRun& bigger,
                  const RunEmbedding& emb, long long n) {
    switch (base.kind) {
    case ExprKind::Leaf:
        return pump_leaf(e, base, bigger, emb, n);
    case ExprKind::Comp: {
        ExprRun out;
        out.node = base.node;
        out.kind = ExprKind::Comp;
        out.children.push_back(
            pump_node(e, base.children[0], bigger.children[0], emb.children[0], n));
        out.children.push_back(
            pump_node(e, base.children[1], bigger.children[1], emb.children[1], n));
        out.src = out.children[0].src;
        out.tgt = out.children[1].tgt;
        return out;
    }
    case ExprKind::Union: {
        ExprRun out;
        out.node = base.node;
        out.kind = ExprKind::Union;
        out.branch = base.branch;
        out.children.push_back(
            pump_node(e, base.children[0], bigger.children[0], emb.children[0], n));
        out.src = out.children[0].src;
        out.tgt = out.children[0].tgt;
        return out;
    }
    case ExprKind::Star:
        return pump_star(e, base, bigger, emb, n);
    }
    throw Error("pump_run: bad node kind");
}

} // namespace

ExprRun pump_run(const Expression& e, const PumpPair& pp, long long n) {
    if (n < 0) throw Error("pump_run: negative repetition count");
    ExprRun out = pump_node(e, pp.base, pp.bigger, pp.embedding, n);
    auto violations = validate_expr_run(e, out, pp.base.node);
    if (!violations.empty())
        throw Error("pump_run: construction produced an invalid run: " + violations.front());
    Vec want_src = vec_add(pp.base.src, vec_scale(pp.delta.first, n));
    Vec want_tgt = vec_add(pp.base.tgt, vec_scale(pp.delta.second, n));
    if (out.src != want_src || out.tgt != want_tgt)
        throw Error("pump_run: construction missed the target ends");
    if (!run_leq(e, pp.base, out).leq)
        throw Error("pump_run: amplified run does not dominate the base");
    return out;
}

// ---------------------------------------------------------------------------
// Transformer samples

std::string TransformerSample::to_text() const {
    std::ostringstream os;
    os << "# " << context << "\n";
    os << "bound " << bound << "\n";
    for (const auto& [x, y] : pairs.pairs())
        os << format_vec(x) << " -> " << format_vec(y) << "\n";
    return os.str();
}

TransformerSample transformer_config_sample(const Expression& star_expr, const Vec& c,
                                            long long bound) {
    if (star_expr.root().kind != ExprKind::Star)
        throw Error("transformer_config_sample: expression is not a star");
    if (static_cast<int>(c.size()) != star_expr.in_dim())
        throw Error("transformer_config_sample: configuration dimension mismatch");
    long long eval_bound = bound + vec_max_entry(c);
    BoundedRel rel = eval_expression_bounded(star_expr, eval_bound);
    TransformerSample s;
    s.context = "P at configuration " + format_vec(c);
    s.bound = bound;
    s.pairs = BoundedRel(c.size(), c.size());
    for (const Vec& x : enumerate_vectors(c.size(), bound))
        for (const Vec& y : enumerate_vectors(c.size(), bound))
            if (rel.contains(vec_add(c, x), vec_add(c, y))) s.pairs.insert(x, y);
    return s;
}

TransformerSample transformer_run_sample(const Expression& e, const ExprRun& rho,
                                         const std::vector<ExprRun>& window) {
    TransformerSample s;
    s.context = "P of run at node " + std::to_string(rho.node);
    s.pairs = BoundedRel(rho.src.size(), rho.tgt.size());
    for (const ExprRun& r : window) {
        if (r.node != rho.node) continue;
        if (!run_leq(e, rho, r).leq) continue;
        Vec dx = vec_sub(r.src, rho.src);
        Vec dy = vec_sub(r.tgt, rho.tgt);
        s.bound = std::max({s.bound, vec_max_entry(dx), vec_max_entry(dy)});
        s.pairs.insert(dx, dy);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Decomposition (star runs alternate with recursively expanded segments)

namespace {

void decompose_node(const Expression& e, const ExprRun& r, std::vector<Factor>& out) {
    const ExprNode& n = e.node(r.node);
    switch (n.kind) {
    case ExprKind::Leaf: {
        Factor f;
        f.kind = Factor::Kind::LeafBlock;
        f.node = r.node;
        f.configs = r.leaf_run.configs;
        out.push_back(std::move(f));
        return;
    }
    case ExprKind::Comp:
        decompose_node(e, r.children[0], out);
        decompose_node(e, r.children[1], out);
        return;
    case ExprKind::Union:
        decompose_node(e, r.children[0], out);
        return;
    case ExprKind::Star: {
        Factor f;
        f.kind = Factor::Kind::StarConfig;
        f.node = r.node;
        f.config = r.src;
        out.push_back(f);
        for (const ExprRun& seg : r.children) {
            decompose_node(e, seg, out);
            Factor g;
            g.kind = Factor::Kind::StarConfig;
            g.node = r.node;
            g.config = seg.tgt;
            out.push_back(std::move(g));
        }
        return;
    }
    }
}

// P_c of a model configuration, sampled over deltas <= bound with the
// oracle capped at bound + the configuration's largest entry.
BoundedRel config_factor(const Pvass& m, const Configuration& c, long long bound) {
    size_t d = c.counters.size();
    BoundedRel rel(d, d);
    long long cap = bound + vec_max_entry(c.counters);
    for (const Vec& u : enumerate_vectors(d, bound)) {
        Configuration start{c.state, vec_add(c.counters, u)};
        auto reach = reach_set_bounded(m, start, cap);
        for (const Configuration& t : reach) {
            if (t.state != c.state) continue;
            Vec v = vec_sub(t.counters, c.counters);
            if (is_natural(v) && vec_within(v, bound)) rel.insert(u, v);
        }
    }
    return rel;
}

BoundedRel factor_relation(const Expression& e, const Factor& f, long long bound) {
    if (f.kind == Factor::Kind::StarConfig) {
        Expression sub = e.subexpression(f.node);
        return transformer_config_sample(sub, f.config, bound).pairs;
    }
    const Section& s = e.node(f.node).section;
    const Pvass& m = s.model;
    size_t din = static_cast<size_t>(s.free_in());
    size_t dout = static_cast<size_t>(s.free_out());
    size_t dm = static_cast<size_t>(m.dim);
    // embed free-input deltas (insertions keep the fixed prefix intact)
    BoundedRel acc(din, dm);
    for (const Vec& x : enumerate_vectors(din, bound))
        acc.insert(x, concat(zeros(dm - din), x));
    for (const Configuration& c : f.configs)
        acc = BoundedRel::compose(acc, config_factor(m, c, bound));
    BoundedRel project(dm, dout);
    for (const Vec& y : enumerate_vectors(dout, bound))
        project.insert(concat(zeros(dm - dout), y), y);
    return BoundedRel::compose(acc, project);
}

} // namespace

Decomposition decompose_transformer(const Expression& e, const ExprRun& rho) {
    auto violations = validate_expr_run(e, rho, rho.node);
    if (!violations.empty())
        throw Error("decompose_transformer: invalid run: " + violations.front());
    Decomposition d;
    decompose_node(e, rho, d.factors);
    return d;
}

BoundedRel sample_decomposition(const Expression& e, const Decomposition& d, long long bound) {
    if (d.factors.empty()) throw Error("sample_decomposition: empty decomposition");
    BoundedRel acc = factor_relation(e, d.factors[0], bound);
    for (size_t i = 1; i < d.factors.size(); ++i)
        acc = BoundedRel::compose(acc, factor_relation(e, d.factors[i], bound));
    return acc;
}

// ---------------------------------------------------------------------------
// Witness assembly (the constructive direction of the star decomposition)

ExprRun compose_witness(const Expression& e, const ExprRun& rho,
                        const std::vector<ExprRun>& boundary_runs,
                        const std::vector<ExprRun>& segment_witnesses) {
    const ExprNode& n = e.node(rho.node);
    if (n.kind != ExprKind::Star) throw Error("compose_witness: run is not a star run");
    size_t r = rho.children.size();
    if (boundary_runs.size() != r + 1)
        throw Error("compose_witness: need " + std::to_string(r + 1) + " boundary runs");
    if (segment_witnesses.size() != r)
        throw Error("compose_witness: need " + std::to_string(r) + " segment witnesses");

    for (size_t i = 0; i <= r; ++i) {
        if (boundary_runs[i].node != rho.node || boundary_runs[i].kind != ExprKind::Star)
            throw Error("compose_witness: boundary run " + std::to_string(i) +
                        " is not a run of this star");
    }
    for (size_t i = 0; i < r; ++i) {
        if (!run_leq(e, rho.children[i], segment_witnesses[i]).leq)
            throw Error("compose_witness: segment witness " + std::to_string(i) +
                        " does not dominate the segment");
    }
    // junctions: rho_0 eta'_1 rho_1 ... eta'_r rho_r
    for (size_t i = 0; i < r; ++i) {
        if (boundary_runs[i].tgt != segment_witnesses[i].src)
            throw Error("compose_witness: junction mismatch entering segment " +
                        std::to_string(i + 1));
        if (segment_witnesses[i].tgt != boundary_runs[i + 1].src)
            throw Error("compose_witness: junction mismatch leaving segment " +
                        std::to_string(i + 1));
    }

    ExprRun out;
    out.node = rho.node;
    out.kind = ExprKind::Star;
    out.src = boundary_runs.front().src;
    out.tgt = boundary_runs.back().tgt;
    for (size_t i = 0; i < r; ++i) {
        for (const ExprRun& seg : boundary_runs[i].children) out.children.push_back(seg);
        out.children.push_back(segment_witnesses[i]);
    }
    for (const ExprRun& seg : boundary_runs.back().children) out.children.push_back(seg);

    auto violations = validate_expr_run(e, out, rho.node);
    if (!violations.empty())
        throw Error("compose_witness: assembled run invalid: " + violations.front());
    if (!run_leq(e, rho, out).leq)
        throw Error("compose_witness: assembled run does not dominate the base run");
    return out;
}

} // namespace pvk
