#pragma once

#include "pvk/model.hpp"
#include "pvk/relation.hpp"

#include <string>
#include <vector>

namespace pvk {

enum class ExprKind { Leaf, Comp, Union, Star };

// One node of an expression syntax tree. Nodes live in a preorder arena;
// a node's tag is its arena index, which makes tags unique per tree and
// stable under serialization.
struct ExprNode {
    ExprKind kind = ExprKind::Leaf;
    int in_dim = 0;
    int out_dim = 0;
    int left = -1;  // Comp/Union: left child; Star: inner
    int right = -1; // Comp/Union: right child
    Section section; // Leaf only
};

// The expression grammar over VASS sections: E ::= Y | E.E | E|E | E*.
// Composition joins on the shared middle dimension, union requires equal
// dimensions, star requires a square relation.
class Expression {
public:
    static Expression leaf(Section s);
    static Expression comp(const Expression& a, const Expression& b);
    static Expression union_of(const Expression& a, const Expression& b);
    static Expression star(const Expression& inner);

    size_t size() const { return nodes_.size(); }
    const ExprNode& node(int i) const { return nodes_.at(i); }
    const ExprNode& root() const { return nodes_.at(0); }
    int in_dim() const { return root().in_dim; }
    int out_dim() const { return root().out_dim; }

    // The subtree rooted at node i as a standalone expression.
    Expression subexpression(int i) const;

    const std::vector<ExprNode>& nodes() const { return nodes_; }

private:
    std::vector<ExprNode> nodes_;
};

std::vector<std::string> validate_expression(const Expression& e);

// Bounded evaluation: leaf via the section oracle, composition via a join
// on middles <= bound, star via reflexivity on all vectors <= bound plus
// fixpoint iteration of the join. Exact over entries <= bound given leaf
// relations restricted to <= bound.
BoundedRel eval_expression_bounded(const Expression& e, long long bound);

struct MonotoneAnalysis {
    std::vector<int> min_subdim; // per node: min in/out dim over its subtree
    bool star_on_monotone = false;
};

MonotoneAnalysis monotone_analysis(const Expression& e);

// Builds an expression for a section over a single-state normalized PVAS by
// induction on the maximal zero-test level: the top level's edges either
// never fire, or the run crosses configurations with the tested prefix at
// zero, alternating lower-level phases with single tested edges.
Expression pvass_to_regex(const Section& s);

// Inverse direction: one PVASS per node, all leaf models padded to a common
// dimension with all-zero fixed prefixes; union adds a fresh source/sink
// pair, composition a zero-testing bridge, star a zero-testing loop state.
Section regex_to_pvass(const Expression& e);

// Rewrites the expression so every star satisfies the Lemma-2 criterion
// (all subexpression dimensions >= the star's dimension) while preserving
// the denoted relation. Uses the Kleene identities
//   (A.B)* = id | A.(B.A)*.B        (rotation to the narrowest boundary)
//   (C|R)* = R*.(C.R*)*             (branch peeling, narrowest pinch first)
// after distributing unions out of compositions.
Expression normalize_star_monotone(const Expression& e);

} // namespace pvk
