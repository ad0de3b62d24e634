#pragma once

#include "pvk/expr.hpp"
#include "pvk/model.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pvk {

// A run of an expression, shaped like the expression's syntax tree. Every
// node records the node tag it belongs to plus its projected end vectors;
// leaf runs keep the underlying model run, star runs a chained sequence of
// inner runs, union runs the chosen branch.
struct ExprRun {
    int node = 0;
    ExprKind kind = ExprKind::Leaf;
    Vec src; // projected source (free input coordinates)
    Vec tgt; // projected target (free output coordinates)

    Run leaf_run;                  // Leaf
    int branch = -1;               // Union: 0 = left, 1 = right
    std::vector<ExprRun> children; // Comp: [left, right]; Union: [inner]; Star: segments

    size_t total_steps() const;

    bool operator==(const ExprRun& o) const;
    bool operator<(const ExprRun& o) const;
};

// dir(rho) = (source, target) as projected vectors.
inline std::pair<Vec, Vec> dir(const ExprRun& r) { return {r.src, r.tgt}; }

struct OrderVerdict {
    bool leq = false;
    // Higman witness: for each left index, the matched right index.
    std::optional<std::vector<size_t>> witness;
};

// Embedding structure for run comparisons, mirroring the run tree.
struct RunEmbedding {
    std::vector<size_t> word_map;       // Leaf: step i -> step of the larger run
    std::vector<size_t> segment_map;    // Star: segment i -> segment of the larger run
    std::vector<RunEmbedding> children; // Comp: [l, r]; Union: [inner]; Star: per matched segment
};

struct RunOrderVerdict {
    bool leq = false;
    std::optional<RunEmbedding> embedding;
};

bool dickson_leq(const Vec& x, const Vec& y);

// Scattered-subword embedding with the given element order; the witness is
// the greedy-leftmost embedding, which exists whenever any embedding does.
template <typename T>
OrderVerdict higman_leq(const std::vector<T>& w, const std::vector<T>& w2,
                        const std::function<bool(const T&, const T&)>& elem_leq) {
    std::vector<size_t> f;
    f.reserve(w.size());
    size_t j = 0;
    for (size_t i = 0; i < w.size(); ++i) {
        while (j < w2.size() && !elem_leq(w[i], w2[j])) ++j;
        if (j == w2.size()) return {false, std::nullopt};
        f.push_back(j);
        ++j;
    }
    return {true, f};
}

// Exhaustive embedding search; test oracle for the greedy witness.
template <typename T>
bool higman_leq_exhaustive(const std::vector<T>& w, const std::vector<T>& w2,
                           const std::function<bool(const T&, const T&)>& elem_leq,
                           size_t i = 0, size_t j = 0) {
    if (i == w.size()) return true;
    for (size_t k = j; k < w2.size(); ++k)
        if (elem_leq(w[i], w2[k]) && higman_leq_exhaustive(w, w2, elem_leq, i + 1, k + 1))
            return true;
    return false;
}

// Validates that a run belongs to Omega(E) for the subexpression rooted at
// `node`: tags match, leaf runs replay, ends chain, projections agree.
std::vector<std::string> validate_expr_run(const Expression& e, const ExprRun& r, int node = 0);

// The run ordering: Jancar ordering on leaves (sources and targets
// componentwise, step words by scattered-subword embedding over pairs of a
// configuration vector and an equal edge), branch-respecting on unions,
// componentwise on compositions, and Higman over segments on stars.
RunOrderVerdict run_leq(const Expression& e, const ExprRun& a, const ExprRun& b);

// All runs with every configuration <= bound and at most max_steps leaf
// steps (star runs use at most max_steps+1 segments), in deterministic
// order: lexicographic on (total steps, serialized form).
std::vector<ExprRun> enumerate_runs_bounded(const Expression& e, long long bound,
                                            size_t max_steps);

// The antichain of minimal elements; every member of `runs` dominates one.
std::vector<ExprRun> minimal_elements(const std::vector<ExprRun>& runs, const Expression& e);

std::string serialize_run(const ExprRun& r, const Expression& e);
ExprRun parse_run(const std::string& text, const Expression& e);

} // namespace pvk
