#include "pvk/expr.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>

namespace pvk {

static void append_shifted(std::vector<ExprNode>& dst, const std::vector<ExprNode>& src) {
    int offset = static_cast<int>(dst.size());
    for (const ExprNode& n : src) {
        ExprNode c = n;
        if (c.left >= 0) c.left += offset;
        if (c.right >= 0) c.right += offset;
        dst.push_back(std::move(c));
    }
}

Expression Expression::leaf(Section s) {
    Expression e;
    ExprNode n;
    n.kind = ExprKind::Leaf;
    n.in_dim = s.free_in();
    n.out_dim = s.free_out();
    n.section = std::move(s);
    e.nodes_.push_back(std::move(n));
    return e;
}

Expression Expression::comp(const Expression& a, const Expression& b) {
    Expression e;
    ExprNode n;
    n.kind = ExprKind::Comp;
    n.in_dim = a.in_dim();
    n.out_dim = b.out_dim();
    n.left = 1;
    n.right = 1 + static_cast<int>(a.size());
    e.nodes_.push_back(std::move(n));
    append_shifted(e.nodes_, a.nodes_);
    append_shifted(e.nodes_, b.nodes_);
    return e;
}

Expression Expression::union_of(const Expression& a, const Expression& b) {
    Expression e;
    ExprNode n;
    n.kind = ExprKind::Union;
    n.in_dim = a.in_dim();
    n.out_dim = a.out_dim();
    n.left = 1;
    n.right = 1 + static_cast<int>(a.size());
    e.nodes_.push_back(std::move(n));
    append_shifted(e.nodes_, a.nodes_);
    append_shifted(e.nodes_, b.nodes_);
    return e;
}

Expression Expression::star(const Expression& inner) {
    Expression e;
    ExprNode n;
    n.kind = ExprKind::Star;
    n.in_dim = inner.in_dim();
    n.out_dim = inner.in_dim();
    n.left = 1;
    e.nodes_.push_back(std::move(n));
    append_shifted(e.nodes_, inner.nodes_);
    return e;
}

static int subtree_size(const Expression& e, int i) {
    const ExprNode& n = e.node(i);
    int sz = 1;
    if (n.left >= 0) sz += subtree_size(e, n.left);
    if (n.right >= 0) sz += subtree_size(e, n.right);
    return sz;
}

Expression Expression::subexpression(int i) const {
    int sz = subtree_size(*this, i);
    Expression out;
    for (int j = i; j < i + sz; ++j) {
        ExprNode c = nodes_.at(j);
        if (c.left >= 0) c.left -= i;
        if (c.right >= 0) c.right -= i;
        out.nodes_.push_back(std::move(c));
    }
    return out;
}

std::vector<std::string> validate_expression(const Expression& e) {
    std::vector<std::string> out;
    for (size_t i = 0; i < e.size(); ++i) {
        const ExprNode& n = e.node(static_cast<int>(i));
        std::string tag = "node " + std::to_string(i);
        switch (n.kind) {
        case ExprKind::Leaf: {
            const Section& s = n.section;
            if (!s.model.is_vass())
                out.push_back(tag + ": leaf model performs zero tests (must be a VASS)");
            for (const std::string& v : validate_model(s.model))
                out.push_back(tag + ": leaf model: " + v);
            if (s.free_in() != n.in_dim || s.free_out() != n.out_dim)
                out.push_back(tag + ": leaf dims do not match section free dims");
            if (s.free_in() < 0 || s.free_out() < 0)
                out.push_back(tag + ": fixed prefix longer than model dimension");
            break;
        }
        case ExprKind::Comp: {
            const ExprNode& l = e.node(n.left);
            const ExprNode& r = e.node(n.right);
            if (l.out_dim != r.in_dim)
                out.push_back(tag + ": composition middle dimensions differ (" +
                              std::to_string(l.out_dim) + " vs " + std::to_string(r.in_dim) + ")");
            if (n.in_dim != l.in_dim || n.out_dim != r.out_dim)
                out.push_back(tag + ": composition endpoint dimensions inconsistent");
            break;
        }
        case ExprKind::Union: {
            const ExprNode& l = e.node(n.left);
            const ExprNode& r = e.node(n.right);
            if (l.in_dim != r.in_dim || l.out_dim != r.out_dim)
                out.push_back(tag + ": union children dimensions differ");
            if (n.in_dim != l.in_dim || n.out_dim != l.out_dim)
                out.push_back(tag + ": union dimensions inconsistent");
            break;
        }
        case ExprKind::Star: {
            const ExprNode& in = e.node(n.left);
            if (in.in_dim != in.out_dim)
                out.push_back(tag + ": star over a non-square relation (" +
                              std::to_string(in.in_dim) + " vs " + std::to_string(in.out_dim) + ")");
            if (n.in_dim != in.in_dim || n.out_dim != in.in_dim)
                out.push_back(tag + ": star dimensions inconsistent");
            break;
        }
        }
    }
    return out;
}

static BoundedRel eval_node(const Expression& e, int i, long long bound) {
    const ExprNode& n = e.node(i);
    switch (n.kind) {
    case ExprKind::Leaf:
        return section_eval_bounded(n.section, bound);
    case ExprKind::Comp:
        return BoundedRel::compose(eval_node(e, n.left, bound), eval_node(e, n.right, bound));
    case ExprKind::Union:
        return BoundedRel::unite(eval_node(e, n.left, bound), eval_node(e, n.right, bound));
    case ExprKind::Star:
        return BoundedRel::star(eval_node(e, n.left, bound), bound);
    }
    throw Error("eval_expression_bounded: bad node kind");
}

BoundedRel eval_expression_bounded(const Expression& e, long long bound) {
    auto violations = validate_expression(e);
    if (!violations.empty())
        throw Error("eval_expression_bounded: invalid expression: " + violations.front());
    return eval_node(e, 0, bound);
}

MonotoneAnalysis monotone_analysis(const Expression& e) {
    MonotoneAnalysis a;
    a.min_subdim.assign(e.size(), 0);
    std::function<int(int)> go = [&](int i) -> int {
        const ExprNode& n = e.node(i);
        int m = std::min(n.in_dim, n.out_dim);
        if (n.left >= 0) m = std::min(m, go(n.left));
        if (n.right >= 0) m = std::min(m, go(n.right));
        a.min_subdim[i] = m;
        return m;
    };
    go(0);
    a.star_on_monotone = true;
    for (size_t i = 0; i < e.size(); ++i)
        if (e.node(static_cast<int>(i)).kind == ExprKind::Star &&
            a.min_subdim[i] < e.node(static_cast<int>(i)).in_dim)
            a.star_on_monotone = false;
    return a;
}

// ---------------------------------------------------------------------------
// PVAS section -> expression (induction on the maximal zero-test level)

static Expression build_level(const Pvass& m, const Vec& bs, const Vec& bt) {
    int k = m.max_zerotest();
    if (k == 0) {
        Section s;
        s.model = m;
        s.p = 0;
        s.q = 0;
        s.bs = bs;
        s.bt = bt;
        return Expression::leaf(std::move(s));
    }
    Pvass below;
    below.dim = m.dim;
    below.states = m.states;
    std::vector<Edge> topmost;
    for (const Edge& e : m.edges) {
        if (e.zerotest < k)
            below.add_edge(e.from, e.to, e.update, e.zerotest);
        else
            topmost.push_back(e);
    }
    Vec zk = zeros(static_cast<size_t>(k));

    Expression e_skip = build_level(below, bs, bt);
    Expression e_in = build_level(below, bs, zk);
    Expression e_mid = build_level(below, zk, zk);
    Expression e_out = build_level(below, zk, bt);

    // The topmost zero-testing actions as a plain VASS section fixing 0^k at
    // both ends; the tested counters are not updated (normalized model), so
    // they stay zero across the two-step encoding.
    Pvass vz;
    vz.dim = m.dim;
    StateId zin = vz.add_state("zin");
    StateId zfin = vz.add_state("zfin");
    for (const Edge& e : topmost) {
        StateId mid = vz.add_state("z" + std::to_string(e.id));
        vz.add_edge(zin, mid, e.update, 0);
        vz.add_edge(mid, zfin, zeros(m.dim), 0);
    }
    Section zsec;
    zsec.model = vz;
    zsec.p = zin;
    zsec.q = zfin;
    zsec.bs = zk;
    zsec.bt = zk;
    Expression e_z = Expression::leaf(std::move(zsec));

    if (e_mid.in_dim() != e_z.in_dim() || e_mid.out_dim() != e_z.out_dim())
        throw Error("pvass_to_regex: union dimensions diverge at test level " +
                    std::to_string(k) + " (" + std::to_string(e_mid.in_dim()) + "," +
                    std::to_string(e_mid.out_dim()) + ") vs (" + std::to_string(e_z.in_dim()) +
                    "," + std::to_string(e_z.out_dim()) +
                    "); the construction only applies to priority tests");

    Expression star = Expression::star(Expression::union_of(e_mid, e_z));
    Expression chain = Expression::comp(e_in, Expression::comp(star, e_out));
    return Expression::union_of(e_skip, chain);
}

Expression pvass_to_regex(const Section& s) {
    if (s.model.states.size() != 1)
        throw Error("pvass_to_regex: model must be single-state (eliminate states first)");
    if (!s.model.is_normalized())
        throw Error("pvass_to_regex: model must be normalized (zero-tested counters unchanged)");
    return build_level(s.model, s.bs, s.bt);
}

// ---------------------------------------------------------------------------
// Expression -> PVASS section (one machine per node, common dimension)

namespace {

struct BuildPart {
    Pvass model;
    StateId p = 0;
    StateId q = 0;
};

void merge_model(Pvass& dst, const Pvass& src) {
    int base = static_cast<int>(dst.states.size());
    for (const auto& name : src.states) dst.states.push_back(name);
    for (const Edge& e : src.edges)
        dst.add_edge(e.from + base, e.to + base, e.update, e.zerotest);
}

BuildPart build_part(const Expression& e, int i, int common_dim);

BuildPart build_leaf(const ExprNode& n, int common_dim) {
    const Section& s = n.section;
    int dv = s.model.dim;
    int din = s.free_in();
    int dout = s.free_out();

    Pvass m = s.model;
    StateId qin = m.add_state("in");
    StateId qfin = m.add_state("fin");
    // entering adds b_s onto the zeroed prefix, leaving subtracts b_t
    m.add_edge(qin, s.p, concat(s.bs, zeros(din)), 0);
    Vec neg = concat(s.bt, zeros(dout));
    for (auto& x : neg) x = -x;
    m.add_edge(s.q, qfin, std::move(neg), 0);

    // pad to the common dimension with unused counters placed after the real
    // fixed block, keeping both free suffixes trailing
    int pad = common_dim - dv;
    int cut = dv - std::max(din, dout);
    Pvass padded;
    padded.dim = common_dim;
    padded.states = m.states;
    for (const Edge& ed : m.edges) {
        Vec u = prefix(ed.update, cut);
        u = concat(u, zeros(pad));
        u = concat(u, suffix(ed.update, dv - cut));
        padded.add_edge(ed.from, ed.to, std::move(u), ed.zerotest);
    }
    return BuildPart{std::move(padded), qin, qfin};
}

BuildPart build_part(const Expression& e, int i, int common_dim) {
    const ExprNode& n = e.node(i);
    switch (n.kind) {
    case ExprKind::Leaf:
        return build_leaf(n, common_dim);
    case ExprKind::Comp: {
        BuildPart a = build_part(e, n.left, common_dim);
        BuildPart b = build_part(e, n.right, common_dim);
        int dmid = e.node(n.left).out_dim;
        Pvass m = a.model;
        int base = static_cast<int>(m.states.size());
        merge_model(m, b.model);
        // the bridge zero tests the fixed middle counters
        m.add_edge(a.q, b.p + base, zeros(common_dim), common_dim - dmid);
        return BuildPart{std::move(m), a.p, b.q + base};
    }
    case ExprKind::Union: {
        BuildPart a = build_part(e, n.left, common_dim);
        BuildPart b = build_part(e, n.right, common_dim);
        Pvass m = a.model;
        int base = static_cast<int>(m.states.size());
        merge_model(m, b.model);
        StateId qin = m.add_state("uin");
        StateId qout = m.add_state("uout");
        m.add_edge(qin, a.p, zeros(common_dim), 0);
        m.add_edge(qin, b.p + base, zeros(common_dim), 0);
        m.add_edge(a.q, qout, zeros(common_dim), 0);
        m.add_edge(b.q + base, qout, zeros(common_dim), 0);
        return BuildPart{std::move(m), qin, qout};
    }
    case ExprKind::Star: {
        BuildPart a = build_part(e, n.left, common_dim);
        Pvass m = a.model;
        StateId qin = m.add_state("sin");
        int g = common_dim - n.in_dim;
        m.add_edge(qin, a.p, zeros(common_dim), g);
        m.add_edge(a.q, qin, zeros(common_dim), g);
        return BuildPart{std::move(m), qin, qin};
    }
    }
    throw Error("regex_to_pvass: bad node kind");
}

void uniquify_state_names(Pvass& m) {
    std::map<std::string, int> counts;
    for (auto& s : m.states) {
        int c = counts[s]++;
        if (c > 0) s += "#" + std::to_string(c);
    }
}

} // namespace

Section regex_to_pvass(const Expression& e) {
    auto violations = validate_expression(e);
    if (!violations.empty())
        throw Error("regex_to_pvass: invalid expression: " + violations.front());
    int common = 0;
    for (size_t i = 0; i < e.size(); ++i) {
        const ExprNode& n = e.node(static_cast<int>(i));
        if (n.kind == ExprKind::Leaf) common = std::max(common, n.section.model.dim);
        common = std::max(common, std::max(n.in_dim, n.out_dim));
    }
    BuildPart part = build_part(e, 0, common);
    uniquify_state_names(part.model);
    Section s;
    s.model = std::move(part.model);
    s.p = part.p;
    s.q = part.q;
    s.bs = zeros(static_cast<size_t>(common - e.in_dim()));
    s.bt = zeros(static_cast<size_t>(common - e.out_dim()));
    return s;
}

// ---------------------------------------------------------------------------
// Rewriting stars onto monotone relations

namespace {

int min_dim_of(const Expression& e) {
    int m = std::numeric_limits<int>::max();
    for (size_t i = 0; i < e.size(); ++i) {
        const ExprNode& n = e.node(static_cast<int>(i));
        m = std::min({m, n.in_dim, n.out_dim});
    }
    return m;
}

Expression identity_expr(int dim) {
    Pvass m;
    m.dim = dim;
    m.add_state("s");
    Section s;
    s.model = std::move(m);
    s.p = 0;
    s.q = 0;
    return Expression::leaf(std::move(s));
}

Expression comp_chain(const std::vector<Expression>& atoms, size_t from, size_t to) {
    Expression acc = atoms.at(from);
    for (size_t i = from + 1; i < to; ++i) acc = Expression::comp(acc, atoms[i]);
    return acc;
}

// Distributes unions out of compositions; chains stop at Leaf and Star atoms.
void to_union_of_chains(const Expression& e, int i, std::vector<std::vector<Expression>>& out) {
    const ExprNode& n = e.node(i);
    switch (n.kind) {
    case ExprKind::Leaf:
    case ExprKind::Star:
        out.push_back({e.subexpression(i)});
        return;
    case ExprKind::Union: {
        to_union_of_chains(e, n.left, out);
        to_union_of_chains(e, n.right, out);
        return;
    }
    case ExprKind::Comp: {
        std::vector<std::vector<Expression>> ls, rs;
        to_union_of_chains(e, n.left, ls);
        to_union_of_chains(e, n.right, rs);
        for (const auto& l : ls)
            for (const auto& r : rs) {
                std::vector<Expression> chain = l;
                chain.insert(chain.end(), r.begin(), r.end());
                out.push_back(std::move(chain));
            }
        return;
    }
    }
}

int chain_key(const std::vector<Expression>& chain, int outer_dim) {
    int m = outer_dim;
    for (size_t i = 1; i < chain.size(); ++i) m = std::min(m, chain[i].in_dim());
    return m;
}

Expression star_of_chain(const std::vector<Expression>& atoms, int dim);

Expression star_of_union(std::vector<std::vector<Expression>> chains, int dim) {
    if (chains.size() == 1) return star_of_chain(chains[0], dim);
    // peel the branch with the narrowest pinch first, so the remainder's
    // rewritten guts never dip below the star dimension chosen here
    size_t best = 0;
    for (size_t j = 1; j < chains.size(); ++j)
        if (chain_key(chains[j], dim) < chain_key(chains[best], dim)) best = j;
    std::vector<Expression> c = std::move(chains[best]);
    chains.erase(chains.begin() + static_cast<long>(best));
    Expression rest_star = star_of_union(std::move(chains), dim);
    // (C | R)* = R* . (C . R*)*
    std::vector<Expression> chain = std::move(c);
    chain.push_back(rest_star);
    return Expression::comp(rest_star, star_of_chain(chain, dim));
}

Expression star_of_chain(const std::vector<Expression>& atoms, int dim) {
    // cyclic boundaries: position 0 is the outer interface, position i > 0
    // the interface before atom i
    size_t rot = 0;
    int bmin = dim;
    for (size_t i = 1; i < atoms.size(); ++i) {
        if (atoms[i].in_dim() < bmin) {
            bmin = atoms[i].in_dim();
            rot = i;
        }
    }
    if (rot == 0) {
        Expression whole = comp_chain(atoms, 0, atoms.size());
        if (min_dim_of(whole) >= dim) return Expression::star(whole);
        // narrow nodes live strictly inside an atom; atoms are leaves or
        // already-rewritten stars, so this cannot happen
        throw Error("normalize_star_monotone: atom with guts below its interface");
    }
    // (X0..X{r-1} . Xr..Xm)* = id | X0..X{r-1} . (Xr..Xm . X0..X{r-1})* . Xr..Xm
    Expression pre = comp_chain(atoms, 0, rot);
    Expression post = comp_chain(atoms, rot, atoms.size());
    std::vector<std::vector<Expression>> rotated_chains;
    {
        std::vector<Expression> rotated;
        for (size_t i = rot; i < atoms.size(); ++i) rotated.push_back(atoms[i]);
        for (size_t i = 0; i < rot; ++i) rotated.push_back(atoms[i]);
        rotated_chains.push_back(std::move(rotated));
    }
    Expression inner_star = star_of_union(std::move(rotated_chains), bmin);
    Expression loops = Expression::comp(pre, Expression::comp(inner_star, post));
    return Expression::union_of(identity_expr(dim), loops);
}

Expression repair(const Expression& e, int i) {
    const ExprNode& n = e.node(i);
    switch (n.kind) {
    case ExprKind::Leaf:
        return e.subexpression(i);
    case ExprKind::Comp:
        return Expression::comp(repair(e, n.left), repair(e, n.right));
    case ExprKind::Union:
        return Expression::union_of(repair(e, n.left), repair(e, n.right));
    case ExprKind::Star: {
        Expression inner = repair(e, n.left);
        int dim = inner.in_dim();
        if (min_dim_of(inner) >= dim) return Expression::star(inner);
        std::vector<std::vector<Expression>> chains;
        to_union_of_chains(inner, 0, chains);
        return star_of_union(std::move(chains), dim);
    }
    }
    throw Error("normalize_star_monotone: bad node kind");
}

} // namespace

Expression normalize_star_monotone(const Expression& e) {
    auto violations = validate_expression(e);
    if (!violations.empty())
        throw Error("normalize_star_monotone: invalid expression: " + violations.front());
    return repair(e, 0);
}

} // namespace pvk
