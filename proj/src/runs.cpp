#include "pvk/runs.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace pvk {

size_t ExprRun::total_steps() const {
    if (kind == ExprKind::Leaf) return leaf_run.steps();
    size_t n = 0;
    for (const ExprRun& c : children) n += c.total_steps();
    return n;
}

bool ExprRun::operator==(const ExprRun& o) const {
    return node == o.node && kind == o.kind && src == o.src && tgt == o.tgt &&
           branch == o.branch && leaf_run == o.leaf_run && children == o.children;
}

bool ExprRun::operator<(const ExprRun& o) const {
    if (node != o.node) return node < o.node;
    if (kind != o.kind) return kind < o.kind;
    if (src != o.src) return src < o.src;
    if (tgt != o.tgt) return tgt < o.tgt;
    if (branch != o.branch) return branch < o.branch;
    if (!(leaf_run == o.leaf_run)) return leaf_run < o.leaf_run;
    return children < o.children;
}

bool dickson_leq(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw Error("dickson_leq: length mismatch");
    return vec_leq(x, y);
}

// ---------------------------------------------------------------------------
// Validation

std::vector<std::string> validate_expr_run(const Expression& e, const ExprRun& r, int node) {
    std::vector<std::string> out;
    const ExprNode& n = e.node(node);
    std::string tag = "run at node " + std::to_string(node);
    if (r.node != node) {
        out.push_back(tag + ": tag is " + std::to_string(r.node));
        return out;
    }
    if (r.kind != n.kind) {
        out.push_back(tag + ": run shape does not match node kind");
        return out;
    }
    if (static_cast<int>(r.src.size()) != n.in_dim || static_cast<int>(r.tgt.size()) != n.out_dim)
        out.push_back(tag + ": end vector dimensions do not match node dims");

    switch (n.kind) {
    case ExprKind::Leaf: {
        const Section& s = n.section;
        if (!validate_run(s.model, r.leaf_run)) {
            out.push_back(tag + ": leaf run does not replay on the model");
            break;
        }
        const Configuration& a = r.leaf_run.source();
        const Configuration& b = r.leaf_run.target();
        if (a.state != s.p) out.push_back(tag + ": leaf run starts at the wrong state");
        if (b.state != s.q) out.push_back(tag + ": leaf run ends at the wrong state");
        if (prefix(a.counters, s.bs.size()) != s.bs)
            out.push_back(tag + ": source fixed prefix differs from b_s");
        if (prefix(b.counters, s.bt.size()) != s.bt)
            out.push_back(tag + ": target fixed prefix differs from b_t");
        if (suffix(a.counters, s.free_in()) != r.src)
            out.push_back(tag + ": projected source differs");
        if (suffix(b.counters, s.free_out()) != r.tgt)
            out.push_back(tag + ": projected target differs");
        break;
    }
    case ExprKind::Comp: {
        if (r.children.size() != 2) {
            out.push_back(tag + ": composition run needs two children");
            break;
        }
        auto l = validate_expr_run(e, r.children[0], n.left);
        auto rr = validate_expr_run(e, r.children[1], n.right);
        out.insert(out.end(), l.begin(), l.end());
        out.insert(out.end(), rr.begin(), rr.end());
        if (r.children[0].tgt != r.children[1].src)
            out.push_back(tag + ": ends do not chain at the composition junction");
        if (r.src != r.children[0].src || r.tgt != r.children[1].tgt)
            out.push_back(tag + ": composition ends differ from children");
        break;
    }
    case ExprKind::Union: {
        if (r.children.size() != 1 || (r.branch != 0 && r.branch != 1)) {
            out.push_back(tag + ": union run needs one child and a branch marker");
            break;
        }
        int child = r.branch == 0 ? n.left : n.right;
        auto l = validate_expr_run(e, r.children[0], child);
        out.insert(out.end(), l.begin(), l.end());
        if (r.src != r.children[0].src || r.tgt != r.children[0].tgt)
            out.push_back(tag + ": union ends differ from child");
        break;
    }
    case ExprKind::Star: {
        for (const ExprRun& c : r.children) {
            auto l = validate_expr_run(e, c, n.left);
            out.insert(out.end(), l.begin(), l.end());
        }
        if (r.children.empty()) {
            if (r.src != r.tgt) out.push_back(tag + ": empty star run with distinct ends");
        } else {
            if (r.src != r.children.front().src || r.tgt != r.children.back().tgt)
                out.push_back(tag + ": star ends differ from segment ends");
            for (size_t i = 0; i + 1 < r.children.size(); ++i)
                if (r.children[i].tgt != r.children[i + 1].src)
                    out.push_back(tag + ": segments " + std::to_string(i) + "," +
                                  std::to_string(i + 1) + " do not chain");
        }
        break;
    }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ordering

RunOrderVerdict run_leq(const Expression& e, const ExprRun& a, const ExprRun& b) {
    if (a.node != b.node)
        throw Error("run_leq: runs belong to different subexpressions (tags " +
                    std::to_string(a.node) + " vs " + std::to_string(b.node) + ")");
    const ExprNode& n = e.node(a.node);
    RunOrderVerdict no{false, std::nullopt};
    switch (n.kind) {
    case ExprKind::Leaf: {
        if (!dickson_leq(a.src, b.src) || !dickson_leq(a.tgt, b.tgt)) return no;
        using Letter = std::pair<Vec, EdgeId>;
        auto letters = [](const Run& run) {
            std::vector<Letter> w;
            for (size_t i = 0; i < run.edges.size(); ++i)
                w.emplace_back(run.configs[i].counters, run.edges[i]);
            return w;
        };
        std::function<bool(const Letter&, const Letter&)> lo = [](const Letter& x,
                                                                  const Letter& y) {
            return x.second == y.second && vec_leq(x.first, y.first);
        };
        OrderVerdict v = higman_leq(letters(a.leaf_run), letters(b.leaf_run), lo);
        if (!v.leq) return no;
        RunEmbedding emb;
        emb.word_map = *v.witness;
        return {true, emb};
    }
    case ExprKind::Comp: {
        RunOrderVerdict l = run_leq(e, a.children[0], b.children[0]);
        if (!l.leq) return no;
        RunOrderVerdict r = run_leq(e, a.children[1], b.children[1]);
        if (!r.leq) return no;
        RunEmbedding emb;
        emb.children.push_back(*l.embedding);
        emb.children.push_back(*r.embedding);
        return {true, emb};
    }
    case ExprKind::Union: {
        if (a.branch != b.branch) return no; // comparable only within the same branch
        RunOrderVerdict c = run_leq(e, a.children[0], b.children[0]);
        if (!c.leq) return no;
        RunEmbedding emb;
        emb.children.push_back(*c.embedding);
        return {true, emb};
    }
    case ExprKind::Star: {
        if (!dickson_leq(a.src, b.src) || !dickson_leq(a.tgt, b.tgt)) return no;
        std::function<bool(const ExprRun&, const ExprRun&)> so =
            [&](const ExprRun& x, const ExprRun& y) { return run_leq(e, x, y).leq; };
        OrderVerdict v = higman_leq(a.children, b.children, so);
        if (!v.leq) return no;
        RunEmbedding emb;
        emb.segment_map = *v.witness;
        for (size_t i = 0; i < a.children.size(); ++i) {
            RunOrderVerdict c = run_leq(e, a.children[i], b.children[emb.segment_map[i]]);
            emb.children.push_back(*c.embedding);
        }
        return {true, emb};
    }
    }
    throw Error("run_leq: bad node kind");
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

struct Enumerator {
    const Expression& e;
    long long bound;
    std::map<std::pair<int, size_t>, std::vector<ExprRun>> memo;

    const std::vector<ExprRun>& runs(int node, size_t budget) {
        auto key = std::make_pair(node, budget);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        std::vector<ExprRun> out = compute(node, budget);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return memo.emplace(key, std::move(out)).first->second;
    }

    std::vector<ExprRun> compute(int node, size_t budget) {
        const ExprNode& n = e.node(node);
        std::vector<ExprRun> out;
        switch (n.kind) {
        case ExprKind::Leaf: {
            for (const Run& run : enumerate_section_runs(n.section, bound, budget)) {
                ExprRun r;
                r.node = node;
                r.kind = ExprKind::Leaf;
                r.leaf_run = run;
                r.src = suffix(run.source().counters, n.section.free_in());
                r.tgt = suffix(run.target().counters, n.section.free_out());
                out.push_back(std::move(r));
            }
            break;
        }
        case ExprKind::Comp: {
            for (const ExprRun& l : runs(n.left, budget)) {
                for (const ExprRun& r : runs(n.right, budget - l.total_steps())) {
                    if (l.tgt != r.src) continue;
                    ExprRun c;
                    c.node = node;
                    c.kind = ExprKind::Comp;
                    c.src = l.src;
                    c.tgt = r.tgt;
                    c.children = {l, r};
                    out.push_back(std::move(c));
                }
            }
            break;
        }
        case ExprKind::Union: {
            for (int br = 0; br < 2; ++br) {
                for (const ExprRun& c : runs(br == 0 ? n.left : n.right, budget)) {
                    ExprRun u;
                    u.node = node;
                    u.kind = ExprKind::Union;
                    u.branch = br;
                    u.src = c.src;
                    u.tgt = c.tgt;
                    u.children = {c};
                    out.push_back(std::move(u));
                }
            }
            break;
        }
        case ExprKind::Star: {
            size_t dim = static_cast<size_t>(n.in_dim);
            for (const Vec& v : enumerate_vectors(dim, bound)) {
                ExprRun r;
                r.node = node;
                r.kind = ExprKind::Star;
                r.src = v;
                r.tgt = v;
                out.push_back(std::move(r));
            }
            // chained segment sequences, at most budget+1 segments
            std::vector<ExprRun> partial;
            std::function<void(size_t)> extend = [&](size_t used) {
                if (!partial.empty()) {
                    ExprRun r;
                    r.node = node;
                    r.kind = ExprKind::Star;
                    r.src = partial.front().src;
                    r.tgt = partial.back().tgt;
                    r.children = partial;
                    out.push_back(std::move(r));
                }
                if (partial.size() >= budget + 1) return;
                for (const ExprRun& seg : runs(n.left, budget - used)) {
                    if (seg.total_steps() + used > budget) continue;
                    if (!partial.empty() && partial.back().tgt != seg.src) continue;
                    partial.push_back(seg);
                    extend(used + seg.total_steps());
                    partial.pop_back();
                }
            };
            extend(0);
            break;
        }
        }
        return out;
    }
};

} // namespace

std::vector<ExprRun> enumerate_runs_bounded(const Expression& e, long long bound,
                                            size_t max_steps) {
    Enumerator en{e, bound, {}};
    std::vector<ExprRun> out = en.runs(0, max_steps);
    std::sort(out.begin(), out.end(), [&](const ExprRun& a, const ExprRun& b) {
        size_t sa = a.total_steps(), sb = b.total_steps();
        if (sa != sb) return sa < sb;
        return serialize_run(a, e) < serialize_run(b, e);
    });
    return out;
}

std::vector<ExprRun> minimal_elements(const std::vector<ExprRun>& runs, const Expression& e) {
    std::vector<ExprRun> uniq = runs;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::vector<ExprRun> out;
    for (const ExprRun& r : uniq) {
        bool minimal = true;
        for (const ExprRun& o : uniq) {
            if (o == r) continue;
            if (run_leq(e, o, r).leq) {
                minimal = false;
                break;
            }
        }
        if (minimal) out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

char kind_char(ExprKind k) {
    switch (k) {
    case ExprKind::Leaf: return 'Y';
    case ExprKind::Comp: return 'C';
    case ExprKind::Union: return 'U';
    case ExprKind::Star: return 'S';
    }
    return '?';
}

void write_run(std::ostream& os, const ExprRun& r, const Expression& e) {
    const ExprNode& n = e.node(r.node);
    char k = kind_char(r.kind);
    os << "[" << k << r.node;
    if (r.kind == ExprKind::Union) os << ":" << r.branch;
    os << "|";
    switch (r.kind) {
    case ExprKind::Leaf: {
        const Pvass& m = n.section.model;
        for (size_t i = 0; i < r.leaf_run.configs.size(); ++i) {
            if (i) os << " e" << r.leaf_run.edges[i - 1] << " ";
            const Configuration& c = r.leaf_run.configs[i];
            os << "(" << m.states[c.state] << "," << format_vec(c.counters) << ")";
        }
        break;
    }
    case ExprKind::Comp:
    case ExprKind::Union:
        for (size_t i = 0; i < r.children.size(); ++i) {
            if (i) os << " ";
            write_run(os, r.children[i], e);
        }
        break;
    case ExprKind::Star:
        os << format_vec(r.src);
        for (const ExprRun& c : r.children) {
            os << " ";
            write_run(os, c, e);
        }
        os << " " << format_vec(r.tgt);
        break;
    }
    os << "|" << k << r.node << "]";
}

struct Scanner {
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\n' || s[pos] == '\t')) ++pos;
    }
    char peek() {
        skip_ws();
        if (pos >= s.size()) throw Error("run parser: unexpected end of input");
        return s[pos];
    }
    void expect(char c) {
        if (peek() != c)
            throw Error(std::string("run parser: expected '") + c + "' at position " +
                        std::to_string(pos));
        ++pos;
    }
    long long integer() {
        skip_ws();
        size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw Error("run parser: expected integer at " + std::to_string(start));
        return std::stoll(s.substr(start, pos - start));
    }
    Vec vec() {
        expect('(');
        Vec v;
        if (peek() == ')') {
            ++pos;
            return v;
        }
        while (true) {
            v.push_back(integer());
            if (peek() == ')') {
                ++pos;
                return v;
            }
            expect(',');
        }
    }
    std::string until(char stop) {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && s[pos] != stop) ++pos;
        return s.substr(start, pos - start);
    }
};

ExprRun parse_node_run(Scanner& sc, const Expression& e, int node) {
    const ExprNode& n = e.node(node);
    char k = kind_char(n.kind);
    sc.expect('[');
    sc.expect(k);
    long long tag = sc.integer();
    if (tag != node)
        throw Error("run parser: tag " + std::to_string(tag) + " where node " +
                    std::to_string(node) + " expected");
    ExprRun r;
    r.node = node;
    r.kind = n.kind;
    if (n.kind == ExprKind::Union) {
        sc.expect(':');
        r.branch = static_cast<int>(sc.integer());
    }
    sc.expect('|');
    switch (n.kind) {
    case ExprKind::Leaf: {
        const Pvass& m = n.section.model;
        while (true) {
            sc.expect('(');
            std::string state = sc.until(',');
            sc.expect(',');
            Vec counters = sc.vec();
            sc.expect(')');
            r.leaf_run.configs.push_back(Configuration{m.state_id(state), counters});
            if (sc.peek() != 'e') break;
            sc.expect('e');
            r.leaf_run.edges.push_back(static_cast<EdgeId>(sc.integer()));
        }
        r.src = suffix(r.leaf_run.source().counters, n.section.free_in());
        r.tgt = suffix(r.leaf_run.target().counters, n.section.free_out());
        break;
    }
    case ExprKind::Comp: {
        r.children.push_back(parse_node_run(sc, e, n.left));
        r.children.push_back(parse_node_run(sc, e, n.right));
        r.src = r.children[0].src;
        r.tgt = r.children[1].tgt;
        break;
    }
    case ExprKind::Union: {
        r.children.push_back(parse_node_run(sc, e, r.branch == 0 ? n.left : n.right));
        r.src = r.children[0].src;
        r.tgt = r.children[0].tgt;
        break;
    }
    case ExprKind::Star: {
        r.src = sc.vec();
        while (sc.peek() == '[') r.children.push_back(parse_node_run(sc, e, n.left));
        r.tgt = sc.vec();
        break;
    }
    }
    sc.expect('|');
    sc.expect(k);
    long long tag2 = sc.integer();
    if (tag2 != node) throw Error("run parser: mismatched closing tag");
    sc.expect(']');
    return r;
}

} // namespace

std::string serialize_run(const ExprRun& r, const Expression& e) {
    std::ostringstream os;
    write_run(os, r, e);
    return os.str();
}

ExprRun parse_run(const std::string& text, const Expression& e) {
    Scanner sc{text};
    ExprRun r = parse_node_run(sc, e, 0);
    auto violations = validate_expr_run(e, r, 0);
    if (!violations.empty()) throw Error("run parser: " + violations.front());
    return r;
}

} // namespace pvk
