#pragma once

#include "pvk/expr.hpp"
#include "pvk/relation.hpp"
#include "pvk/runs.hpp"

#include <string>
#include <vector>

namespace pvk {

// A comparable run pair with its end-pair difference. The embedding is kept
// so amplification does not have to recompute it.
struct PumpPair {
    ExprRun base;
    ExprRun bigger;
    std::pair<Vec, Vec> delta; // dir(bigger) - dir(base), componentwise >= 0
    RunEmbedding embedding;
};

PumpPair make_pump_pair(const Expression& e, const ExprRun& base, const ExprRun& bigger);

// Amplification: a valid run with dir(base) + n*delta as ends, dominating
// base. Leaves repeat each inserted step block n times in place; unions
// recurse on the branch; compositions recurse on both halves; stars repeat
// inserted segment blocks at shifted offsets (the monotone lift) and
// amplify matched segments recursively. The result is re-validated; an
// invalid construction is a hard error.
ExprRun pump_run(const Expression& e, const PumpPair& pp, long long n);

// A finite sampled window of a transformer relation, tagged with the bound
// it was sampled at.
struct TransformerSample {
    std::string context;
    long long bound = 0;
    BoundedRel pairs;

    std::string to_text() const;
};

// Pairs (x, y) with entries <= bound such that c+x evaluates to c+y under
// the starred expression (evaluation runs at bound + max entry of c so the
// shifted vectors stay representable).
TransformerSample transformer_config_sample(const Expression& star_expr, const Vec& c,
                                            long long bound);

// End-pair differences of window runs dominating rho.
TransformerSample transformer_run_sample(const Expression& e, const ExprRun& rho,
                                         const std::vector<ExprRun>& window);

// One factor of the transformer decomposition: either the transformer
// relation of a star subexpression at a configuration occurring along the
// run, or a leaf run's per-configuration factor block.
struct Factor {
    enum class Kind { StarConfig, LeafBlock };
    Kind kind = Kind::StarConfig;
    int node = 0;
    Vec config;                          // StarConfig
    std::vector<Configuration> configs;  // LeafBlock: configs along the leaf run
};

struct Decomposition {
    std::vector<Factor> factors;
};

// Structural decomposition of P_{E,rho}: leaf runs contribute one
// per-configuration block, compositions concatenate, unions delegate, and
// star runs alternate star-at-configuration factors with the recursively
// decomposed factors of their segments.
Decomposition decompose_transformer(const Expression& e, const ExprRun& rho);

// Bounded composition of the decomposition's factors, for comparison with
// transformer_run_sample.
BoundedRel sample_decomposition(const Expression& e, const Decomposition& d, long long bound);

// Assembles rho' = rho_0 eta'_1 rho_1 ... eta'_r rho_r from boundary star
// runs and dominating segment witnesses; every junction is checked and the
// result is validated and verified to dominate rho.
ExprRun compose_witness(const Expression& e, const ExprRun& rho,
                        const std::vector<ExprRun>& boundary_runs,
                        const std::vector<ExprRun>& segment_witnesses);

} // namespace pvk
