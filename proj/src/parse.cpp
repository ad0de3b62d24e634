#include "pvk/parse.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace pvk {

namespace {

std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> t;
    std::string w;
    while (is >> w) t.push_back(w);
    return t;
}

Vec parse_vec_literal(const std::string& s, int line) {
    if (s.size() < 2 || s.front() != '(' || s.back() != ')')
        throw ParseError("expected vector literal '(..)', got '" + s + "'", line);
    Vec v;
    std::string body = s.substr(1, s.size() - 2);
    if (body.empty()) return v;
    std::istringstream is(body);
    std::string item;
    while (std::getline(is, item, ',')) {
        try {
            size_t used = 0;
            long long val = std::stoll(item, &used);
            while (used < item.size() && isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument("");
            v.push_back(val);
        } catch (const std::exception&) {
            throw ParseError("bad vector entry '" + item + "'", line);
        }
    }
    if (!body.empty() && body.back() == ',') throw ParseError("trailing comma in vector", line);
    return v;
}

std::string expect_kv(const std::string& tok, const std::string& key, int line) {
    std::string pre = key + "=";
    if (tok.compare(0, pre.size(), pre) != 0)
        throw ParseError("expected '" + key + "=...', got '" + tok + "'", line);
    return tok.substr(pre.size());
}

} // namespace

Pvass parse_model(const std::string& text) {
    Pvass m;
    bool seen_header = false;
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        auto toks = tokens_of(strip_comment(raw));
        if (toks.empty()) continue;
        if (toks[0] == "pvass") {
            if (seen_header) throw ParseError("duplicate pvass header", lineno);
            if (toks.size() != 2) throw ParseError("pvass line needs dim=<d>", lineno);
            try {
                m.dim = std::stoi(expect_kv(toks[1], "dim", lineno));
            } catch (const ParseError&) {
                throw;
            } catch (const std::exception&) {
                throw ParseError("bad dimension", lineno);
            }
            if (m.dim < 0) throw ParseError("negative dimension", lineno);
            seen_header = true;
        } else if (toks[0] == "state") {
            if (!seen_header) throw ParseError("state before pvass header", lineno);
            if (toks.size() != 2) throw ParseError("state line needs a name", lineno);
            for (const auto& s : m.states)
                if (s == toks[1]) throw ParseError("duplicate state '" + toks[1] + "'", lineno);
            m.add_state(toks[1]);
        } else if (toks[0] == "edge") {
            if (!seen_header) throw ParseError("edge before pvass header", lineno);
            if (toks.size() != 5)
                throw ParseError("edge line needs: edge <from> <to> vec=(..) zerotest=<g>",
                                 lineno);
            StateId from, to;
            try {
                from = m.state_id(toks[1]);
                to = m.state_id(toks[2]);
            } catch (const Error& e) {
                throw ParseError(e.what(), lineno);
            }
            Vec v = parse_vec_literal(expect_kv(toks[3], "vec", lineno), lineno);
            if (static_cast<int>(v.size()) != m.dim)
                throw ParseError("vec arity " + std::to_string(v.size()) + " does not match dim " +
                                     std::to_string(m.dim),
                                 lineno);
            int g;
            try {
                g = std::stoi(expect_kv(toks[4], "zerotest", lineno));
            } catch (const ParseError&) {
                throw;
            } catch (const std::exception&) {
                throw ParseError("bad zerotest level", lineno);
            }
            if (g < 0 || g > m.dim)
                throw ParseError("zerotest level outside 0.." + std::to_string(m.dim), lineno);
            m.add_edge(from, to, std::move(v), g);
        } else {
            throw ParseError("unknown directive '" + toks[0] + "'", lineno);
        }
    }
    if (!seen_header) throw ParseError("missing pvass header", 1);
    return m;
}

std::string write_model(const Pvass& m) {
    std::ostringstream os;
    os << "pvass dim=" << m.dim << "\n";
    for (const auto& s : m.states) os << "state " << s << "\n";
    for (const Edge& e : m.edges)
        os << "edge " << m.states[e.from] << " " << m.states[e.to] << " vec="
           << format_vec(e.update) << " zerotest=" << e.zerotest << "\n";
    return os.str();
}

Configuration parse_configuration(const std::string& text, const Pvass& m) {
    auto toks = tokens_of(text);
    if (toks.size() != 2) throw ParseError("configuration literal is '<state> (..)'", 1);
    Configuration c;
    c.state = m.state_id(toks[0]);
    c.counters = parse_vec_literal(toks[1], 1);
    if (static_cast<int>(c.counters.size()) != m.dim)
        throw ParseError("configuration arity does not match model dimension", 1);
    if (!is_natural(c.counters)) throw ParseError("configuration has negative counters", 1);
    return c;
}

std::string write_configuration(const Configuration& c, const Pvass& m) {
    return m.states[c.state] + " " + format_vec(c.counters);
}

// ---------------------------------------------------------------------------
// Expressions

namespace {

struct SexprScanner {
    const std::string& s;
    size_t pos = 0;
    int line = 1;

    void skip_ws() {
        while (pos < s.size()) {
            if (s[pos] == '\n') ++line;
            if (isspace(static_cast<unsigned char>(s[pos])))
                ++pos;
            else if (s[pos] == '#') {
                while (pos < s.size() && s[pos] != '\n') ++pos;
            } else
                break;
        }
    }
    char peek() {
        skip_ws();
        if (pos >= s.size()) throw ParseError("unexpected end of expression", line);
        return s[pos];
    }
    void expect(char c) {
        if (peek() != c) throw ParseError(std::string("expected '") + c + "'", line);
        ++pos;
    }
    std::string word() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && !isspace(static_cast<unsigned char>(s[pos])) && s[pos] != '(' &&
               s[pos] != ')')
            ++pos;
        if (pos == start) throw ParseError("expected a word", line);
        return s.substr(start, pos - start);
    }
    // a parenthesized vector literal as a raw token
    std::string vec_token() {
        skip_ws();
        if (pos >= s.size() || s[pos] != '(') throw ParseError("expected '('", line);
        size_t start = pos;
        while (pos < s.size() && s[pos] != ')') ++pos;
        if (pos == s.size()) throw ParseError("unterminated vector literal", line);
        ++pos;
        return s.substr(start, pos - start);
    }
};

Expression parse_expr_node(SexprScanner& sc, const std::string& base_dir) {
    sc.expect('(');
    std::string head = sc.word();
    if (head == "leaf") {
        std::string model_file, pname, qname, bs_tok, bt_tok;
        while (sc.peek() != ')') {
            std::string tok = sc.word();
            auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw ParseError("leaf attributes are key=value", sc.line);
            std::string key = tok.substr(0, eq);
            std::string rest = tok.substr(eq + 1);
            // vector values start with '(', where word() stops
            if ((key == "bs" || key == "bt") && rest.empty()) rest = sc.vec_token();
            if (key == "model")
                model_file = rest;
            else if (key == "p")
                pname = rest;
            else if (key == "q")
                qname = rest;
            else if (key == "bs")
                bs_tok = rest;
            else if (key == "bt")
                bt_tok = rest;
            else
                throw ParseError("unknown leaf attribute '" + key + "'", sc.line);
        }
        sc.expect(')');
        if (model_file.empty() || pname.empty() || qname.empty() || bs_tok.empty() ||
            bt_tok.empty())
            throw ParseError("leaf needs model=, p=, q=, bs=, bt=", sc.line);
        std::filesystem::path mp(model_file);
        if (mp.is_relative()) mp = std::filesystem::path(base_dir) / mp;
        Section s;
        s.model = parse_model(read_file(mp.string()));
        s.p = s.model.state_id(pname);
        s.q = s.model.state_id(qname);
        s.bs = parse_vec_literal(bs_tok, sc.line);
        s.bt = parse_vec_literal(bt_tok, sc.line);
        return Expression::leaf(std::move(s));
    }
    if (head == "comp" || head == "union") {
        Expression a = parse_expr_node(sc, base_dir);
        Expression b = parse_expr_node(sc, base_dir);
        sc.expect(')');
        return head == "comp" ? Expression::comp(a, b) : Expression::union_of(a, b);
    }
    if (head == "star") {
        Expression a = parse_expr_node(sc, base_dir);
        sc.expect(')');
        return Expression::star(a);
    }
    throw ParseError("unknown expression head '" + head + "'", sc.line);
}

} // namespace

Expression parse_expression(const std::string& text, const std::string& base_dir) {
    SexprScanner sc{text};
    Expression e = parse_expr_node(sc, base_dir);
    auto v = validate_expression(e);
    if (!v.empty()) throw ParseError("invalid expression: " + v.front(), sc.line);
    return e;
}

Expression parse_expression_file(const std::string& path) {
    std::filesystem::path p(path);
    return parse_expression(read_file(path), p.parent_path().string());
}

namespace {

void write_expr_node(std::ostream& os, const Expression& e, int i, const std::string& stem,
                     const std::string& dir, int& leaf_counter) {
    const ExprNode& n = e.node(i);
    switch (n.kind) {
    case ExprKind::Leaf: {
        std::string fname = stem + "_leaf" + std::to_string(leaf_counter++) + ".pv";
        write_file((std::filesystem::path(dir) / fname).string(), write_model(n.section.model));
        os << "(leaf model=" << fname << " p=" << n.section.model.states[n.section.p]
           << " q=" << n.section.model.states[n.section.q] << " bs=" << format_vec(n.section.bs)
           << " bt=" << format_vec(n.section.bt) << ")";
        break;
    }
    case ExprKind::Comp:
    case ExprKind::Union:
        os << "(" << (n.kind == ExprKind::Comp ? "comp" : "union") << " ";
        write_expr_node(os, e, n.left, stem, dir, leaf_counter);
        os << " ";
        write_expr_node(os, e, n.right, stem, dir, leaf_counter);
        os << ")";
        break;
    case ExprKind::Star:
        os << "(star ";
        write_expr_node(os, e, n.left, stem, dir, leaf_counter);
        os << ")";
        break;
    }
}

} // namespace

void write_expression_file(const Expression& e, const std::string& path) {
    std::filesystem::path p(path);
    std::ostringstream os;
    int leaf_counter = 0;
    write_expr_node(os, e, 0, p.stem().string(), p.parent_path().string(), leaf_counter);
    os << "\n";
    write_file(path, os.str());
}

// ---------------------------------------------------------------------------
// Semilinear sets and flat witnesses

std::pair<std::string, SemilinearSet> parse_semilinear(const std::string& text) {
    std::istringstream is(text);
    std::string raw, name;
    SemilinearSet s;
    int lineno = 0;
    bool seen_header = false;
    while (std::getline(is, raw)) {
        ++lineno;
        auto toks = tokens_of(strip_comment(raw));
        if (toks.empty()) continue;
        if (toks[0] == "semilinear") {
            if (seen_header) throw ParseError("duplicate semilinear header", lineno);
            if (toks.size() != 2) throw ParseError("semilinear line needs a name", lineno);
            name = toks[1];
            seen_header = true;
        } else if (toks[0] == "lin") {
            if (!seen_header) throw ParseError("lin before semilinear header", lineno);
            if (toks.size() != 3)
                throw ParseError("lin line is: lin base=(..) periods=[(..),(..)]", lineno);
            LinearSet l;
            l.base = parse_vec_literal(expect_kv(toks[1], "base", lineno), lineno);
            std::string plist = expect_kv(toks[2], "periods", lineno);
            if (plist.size() < 2 || plist.front() != '[' || plist.back() != ']')
                throw ParseError("periods must be a [..] list", lineno);
            std::string body = plist.substr(1, plist.size() - 2);
            size_t pos = 0;
            while (pos < body.size()) {
                if (body[pos] == ',') {
                    ++pos;
                    continue;
                }
                if (body[pos] != '(') throw ParseError("period list must hold (..) vectors", lineno);
                size_t end = body.find(')', pos);
                if (end == std::string::npos) throw ParseError("unterminated period", lineno);
                l.periods.push_back(parse_vec_literal(body.substr(pos, end - pos + 1), lineno));
                pos = end + 1;
            }
            for (const Vec& p : l.periods)
                if (p.size() != l.base.size())
                    throw ParseError("period arity differs from base", lineno);
            s.components.push_back(std::move(l));
        } else {
            throw ParseError("unknown directive '" + toks[0] + "'", lineno);
        }
    }
    if (!seen_header) throw ParseError("missing semilinear header", 1);
    auto v = validate_semilinear(s);
    if (!v.empty()) throw ParseError("invalid semilinear set: " + v.front(), 1);
    return {name, s};
}

std::string write_semilinear(const std::string& name, const SemilinearSet& s) {
    std::ostringstream os;
    os << "semilinear " << name << "\n";
    for (const LinearSet& l : s.components) {
        os << "lin base=" << format_vec(l.base) << " periods=[";
        for (size_t i = 0; i < l.periods.size(); ++i) {
            if (i) os << ",";
            os << format_vec(l.periods[i]);
        }
        os << "]\n";
    }
    return os.str();
}

FlatWitness parse_flat_witness(const std::string& text) {
    FlatWitness fw;
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        auto toks = tokens_of(strip_comment(raw));
        if (toks.empty()) continue;
        if (toks[0] != "word") throw ParseError("unknown directive '" + toks[0] + "'", lineno);
        std::vector<EdgeId> w;
        if (toks.size() > 2) throw ParseError("word takes one comma-separated list", lineno);
        if (toks.size() == 2) {
            std::istringstream ws(toks[1]);
            std::string item;
            while (std::getline(ws, item, ',')) {
                try {
                    w.push_back(std::stoi(item));
                } catch (const std::exception&) {
                    throw ParseError("bad edge id '" + item + "'", lineno);
                }
            }
        }
        fw.words.push_back(std::move(w));
    }
    return fw;
}

std::string write_flat_witness(const FlatWitness& fw) {
    std::ostringstream os;
    for (const auto& w : fw.words) {
        os << "word ";
        for (size_t i = 0; i < w.size(); ++i) {
            if (i) os << ",";
            os << w[i];
        }
        os << "\n";
    }
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot read file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write file: " + path);
    f << content;
}

} // namespace pvk
