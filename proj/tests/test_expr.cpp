#include "doctest.h"
#include "fixtures.hpp"
#include "pvk/expr.hpp"

using namespace pvk;
using namespace pvk::fixtures;

namespace {

// The two leaves of the composition example over the edgeless model: the
// first pins the composition point at the end, the second at the start.
Expression pinch_example() {
    Expression l1 = Expression::leaf(make_section(edgeless(2), "s", "s", {}, {0}));
    Expression l2 = Expression::leaf(make_section(edgeless(2), "s", "s", {0}, {}));
    return Expression::star(Expression::comp(l1, l2));
}

BoundedRel identity_rel(size_t dim, long long bound) { return BoundedRel::identity(dim, bound); }

} // namespace

TEST_CASE("validate_expression") {
    SUBCASE("the pinched star example is well-formed") {
        CHECK(validate_expression(pinch_example()).empty());
    }
    SUBCASE("composition with mismatched middles") {
        Expression l1 = Expression::leaf(make_section(edgeless(2), "s", "s", {}, {}));
        Expression l2 = Expression::leaf(make_section(edgeless(2), "s", "s", {0}, {}));
        Expression bad = Expression::comp(l1, l2);
        CHECK(validate_expression(bad).size() == 1);
    }
    SUBCASE("star over a non-square relation") {
        Expression l = Expression::leaf(make_section(edgeless(2), "s", "s", {}, {0}));
        Expression bad = Expression::star(l);
        CHECK(validate_expression(bad).size() == 1);
    }
    SUBCASE("a zero-testing leaf model is rejected") {
        Expression l = Expression::leaf(make_section(fig1_left(), "q_s", "q_t", {0}, {0}));
        CHECK(!validate_expression(l).empty());
    }
}

TEST_CASE("bounded evaluation") {
    SUBCASE("composition joins through the empty middle") {
        Expression l1 = Expression::leaf(make_section(incdec1(), "s", "s", {}, {0}));
        Expression l2 = Expression::leaf(make_section(incdec1(), "s", "s", {1}, {}));
        BoundedRel r = eval_expression_bounded(Expression::comp(l1, l2), 2);
        BoundedRel expected(1, 1);
        for (long long x = 0; x <= 2; ++x)
            for (long long y = 0; y <= 2; ++y) expected.insert({x}, {y});
        CHECK(r == expected);
    }
    SUBCASE("the pinched star collapses to the identity") {
        CHECK(eval_expression_bounded(pinch_example(), 2) == identity_rel(2, 2));
    }
    SUBCASE("union is idempotent") {
        auto rng = seeded_rng(3);
        Expression e = random_expression(rng, 2, 2, 2);
        CHECK(eval_expression_bounded(Expression::union_of(e, e), 2) ==
              eval_expression_bounded(e, 2));
    }
    SUBCASE("star contains all reflexive pairs within bound") {
        auto rng = seeded_rng(4);
        for (int trial = 0; trial < 10; ++trial) {
            Expression e = Expression::star(random_expression(rng, 2, 2, 1));
            BoundedRel r = eval_expression_bounded(e, 2);
            for (const Vec& v : enumerate_vectors(2, 2)) CHECK(r.contains(v, v));
        }
    }
}

TEST_CASE("pvass_to_regex") {
    SUBCASE("a VAS section becomes a single leaf") {
        Section s = make_section(incdec1(), "s", "s", {}, {0});
        Expression e = pvass_to_regex(s);
        CHECK(e.size() == 1);
        CHECK(e.root().kind == ExprKind::Leaf);
        CHECK(eval_expression_bounded(e, 2) == section_eval_bounded(s, 2));
    }
    SUBCASE("figure 1 after elimination has the one-level shape") {
        StateElimination elim = eliminate_states(fig1_left());
        Section orig = make_section(fig1_left(), "q_s", "q_t", {0}, {0});
        Section s = elim.map_section(orig);
        Expression e = pvass_to_regex(s);
        // E0 | E0 . (E0 | EZ)* . E0
        const ExprNode& root = e.root();
        REQUIRE(root.kind == ExprKind::Union);
        CHECK(e.node(root.left).kind == ExprKind::Leaf);
        const ExprNode& chain = e.node(root.right);
        REQUIRE(chain.kind == ExprKind::Comp);
        CHECK(e.node(chain.left).kind == ExprKind::Leaf);
        const ExprNode& tail = e.node(chain.right);
        REQUIRE(tail.kind == ExprKind::Comp);
        REQUIRE(e.node(tail.left).kind == ExprKind::Star);
        CHECK(e.node(e.node(tail.left).left).kind == ExprKind::Union);
        CHECK(e.node(tail.right).kind == ExprKind::Leaf);
        CHECK(validate_expression(e).empty());
        CHECK(eval_expression_bounded(e, 1) == section_eval_bounded(s, 1));
    }
    SUBCASE("an unreachable zero test leaves only the low branch") {
        Pvass m;
        m.dim = 1;
        m.add_state("s");
        m.add_edge(0, 0, {1}, 0);
        m.add_edge(0, 0, {0}, 1);
        Section s = make_section(m, "s", "s", {1}, {});
        Expression e = pvass_to_regex(s);
        REQUIRE(e.root().kind == ExprKind::Union);
        Expression low = e.subexpression(e.root().left);
        CHECK(eval_expression_bounded(e, 2) == eval_expression_bounded(low, 2));
        CHECK(eval_expression_bounded(e, 2) == section_eval_bounded(s, 2));
    }
    SUBCASE("round trip against the oracle on random normalized PVAS") {
        auto rng = seeded_rng(5);
        std::uniform_int_distribution<int> dims(1, 3);
        std::uniform_int_distribution<int> fix(0, 1);
        for (int trial = 0; trial < 12; ++trial) {
            int d = dims(rng);
            Pvass m = random_pvas(rng, d, 4, std::min(d, 2));
            Vec bs, bt;
            for (int i = 0; i < std::min(fix(rng), d); ++i) bs.push_back(0);
            for (int i = 0; i < std::min(fix(rng), d); ++i) bt.push_back(0);
            Section s = make_section(m, "s", "s", bs, bt);
            Expression e = pvass_to_regex(s);
            CHECK(validate_expression(e).empty());
            CHECK(eval_expression_bounded(e, 2) == section_eval_bounded(s, 2));
        }
    }
}

TEST_CASE("regex_to_pvass") {
    SUBCASE("a single leaf keeps its bounded relation") {
        Section s = make_section(incdec1(), "s", "s", {1}, {0});
        Expression e = Expression::leaf(s);
        Section back = regex_to_pvass(e);
        CHECK(section_eval_bounded(back, 2) == section_eval_bounded(s, 2));
    }
    SUBCASE("the pinched star example becomes a PVASS denoting the identity") {
        Section s = regex_to_pvass(pinch_example());
        CHECK(section_eval_bounded(s, 2) == identity_rel(2, 2));
    }
    SUBCASE("composition introduces one zero-testing bridge") {
        Expression l1 = Expression::leaf(make_section(incdec1(), "s", "s", {}, {0}));
        Expression l2 = Expression::leaf(make_section(incdec1(), "s", "s", {1}, {}));
        Section s = regex_to_pvass(Expression::comp(l1, l2));
        int tested = 0;
        for (const Edge& e : s.model.edges)
            if (e.zerotest > 0) ++tested;
        CHECK(tested == 1);
        BoundedRel expected(1, 1);
        for (long long x = 0; x <= 2; ++x)
            for (long long y = 0; y <= 2; ++y) expected.insert({x}, {y});
        CHECK(section_eval_bounded(s, 2) == expected);
    }
    SUBCASE("round trip on random expressions") {
        auto rng = seeded_rng(6);
        for (int trial = 0; trial < 12; ++trial) {
            Expression e = random_expression(rng, 2, 2, 2);
            Section s = regex_to_pvass(e);
            CHECK(section_eval_bounded(s, 2) == eval_expression_bounded(e, 2));
        }
    }
}

TEST_CASE("monotone analysis") {
    SUBCASE("the pinch makes the star non-monotone") {
        MonotoneAnalysis a = monotone_analysis(pinch_example());
        CHECK_FALSE(a.star_on_monotone);
        CHECK(a.min_subdim[0] == 1);
    }
    SUBCASE("pinning the pinch coordinate in every leaf repairs it") {
        Expression l1 = Expression::leaf(make_section(edgeless(2), "s", "s", {0}, {0}));
        Expression l2 = Expression::leaf(make_section(edgeless(2), "s", "s", {0}, {0}));
        Expression e = Expression::star(Expression::comp(l1, l2));
        CHECK(monotone_analysis(e).star_on_monotone);
    }
    SUBCASE("a lone leaf is trivially monotone-starred") {
        Expression l = Expression::leaf(make_section(edgeless(2), "s", "s", {}, {0}));
        CHECK(monotone_analysis(l).star_on_monotone);
    }
    SUBCASE("the criterion implies monotonicity within bound") {
        auto rng = seeded_rng(7);
        for (int trial = 0; trial < 10; ++trial) {
            Expression e = random_expression(rng, 2, 2, 2);
            MonotoneAnalysis a = monotone_analysis(e);
            int d = a.min_subdim[0];
            if (d <= 0) continue;
            BoundedRel r = eval_expression_bounded(e, 2);
            for (const auto& [x, y] : r.pairs()) {
                for (int j = 1; j <= d; ++j) {
                    Vec x2 = x, y2 = y;
                    ++x2[x2.size() - j];
                    ++y2[y2.size() - j];
                    if (vec_within(x2, 2) && vec_within(y2, 2)) CHECK(r.contains(x2, y2));
                }
            }
        }
    }
}

TEST_CASE("normalize_star_monotone") {
    SUBCASE("already-conforming expressions pass through") {
        auto rng = seeded_rng(8);
        for (int trial = 0; trial < 8; ++trial) {
            Expression e = random_expression(rng, 1, 1, 2);
            if (!monotone_analysis(e).star_on_monotone) continue;
            Expression n = normalize_star_monotone(e);
            CHECK(monotone_analysis(n).star_on_monotone);
            CHECK(eval_expression_bounded(n, 2) == eval_expression_bounded(e, 2));
        }
    }
    SUBCASE("the pinched star example is rewritten to the identity") {
        Expression n = normalize_star_monotone(pinch_example());
        CHECK(validate_expression(n).empty());
        CHECK(monotone_analysis(n).star_on_monotone);
        CHECK(eval_expression_bounded(n, 2) == identity_rel(2, 2));
    }
    SUBCASE("a leaf stays a leaf-equivalent expression") {
        Expression l = Expression::leaf(make_section(incdec1(), "s", "s", {}, {0}));
        Expression n = normalize_star_monotone(l);
        CHECK(monotone_analysis(n).star_on_monotone);
        CHECK(eval_expression_bounded(n, 2) == eval_expression_bounded(l, 2));
    }
    SUBCASE("random pinched expressions keep their relation") {
        auto rng = seeded_rng(9);
        for (int trial = 0; trial < 12; ++trial) {
            // force a star over a composition through a narrower middle
            Expression e = Expression::star(Expression::comp(random_expression(rng, 2, 1, 1),
                                                             random_expression(rng, 1, 2, 1)));
            REQUIRE_FALSE(monotone_analysis(e).star_on_monotone);
            Expression n = normalize_star_monotone(e);
            CHECK(monotone_analysis(n).star_on_monotone);
            CHECK(eval_expression_bounded(n, 2) == eval_expression_bounded(e, 2));
        }
    }
    SUBCASE("pinched unions peel branch by branch") {
        auto rng = seeded_rng(19);
        for (int trial = 0; trial < 6; ++trial) {
            Expression pinched = Expression::comp(random_expression(rng, 2, 1, 1),
                                                  random_expression(rng, 1, 2, 1));
            Expression other = random_expression(rng, 2, 2, 1);
            Expression e = Expression::star(Expression::union_of(pinched, other));
            REQUIRE_FALSE(monotone_analysis(e).star_on_monotone);
            Expression n = normalize_star_monotone(e);
            CHECK(monotone_analysis(n).star_on_monotone);
            CHECK(eval_expression_bounded(n, 2) == eval_expression_bounded(e, 2));
        }
    }
}

TEST_CASE("sum distributes into composition on samples") {
    auto rng = seeded_rng(10);
    for (int trial = 0; trial < 8; ++trial) {
        Expression a1 = random_expression(rng, 1, 1, 1);
        Expression a2 = random_expression(rng, 1, 1, 1);
        Expression b1 = random_expression(rng, 1, 1, 1);
        Expression b2 = random_expression(rng, 1, 1, 1);
        BoundedRel r1 = eval_expression_bounded(a1, 2);
        BoundedRel r1p = eval_expression_bounded(a2, 2);
        BoundedRel r2 = eval_expression_bounded(b1, 2);
        BoundedRel r2p = eval_expression_bounded(b2, 2);
        BoundedRel lhs = BoundedRel::sum(BoundedRel::compose(r1, r1p),
                                         BoundedRel::compose(r2, r2p));
        BoundedRel rhs = BoundedRel::compose(BoundedRel::sum(r1, r2), BoundedRel::sum(r1p, r2p));
        for (const auto& [x, y] : lhs.pairs()) CHECK(rhs.contains(x, y));
    }
}
