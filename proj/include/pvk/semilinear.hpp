#pragma once

#include "pvk/model.hpp"
#include "pvk/relation.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pvk {

// b + N p_1 + ... + N p_r
struct LinearSet {
    Vec base;
    std::vector<Vec> periods;
};

struct SemilinearSet {
    std::vector<LinearSet> components;

    size_t dim() const { return components.empty() ? 0 : components.front().base.size(); }
};

std::vector<std::string> validate_semilinear(const SemilinearSet& s);

struct SlMembership {
    bool member = false;
    size_t component = 0;                // witnessing component
    std::vector<long long> coefficients; // one per period of that component
};

// Exact membership via bounded coefficient enumeration: each coefficient is
// bounded by the target's entries on the period's support; all-zero periods
// never need a positive coefficient.
SlMembership semilinear_membership(const SemilinearSet& s, const Vec& x);

// mtc(sigma_1,tau_1) . ... . mtc(sigma_r,tau_r): each factor is the
// reflexive-transitive closure of one end pair's monotone lift.
struct LinearPathScheme {
    std::vector<std::pair<Vec, Vec>> end_pairs;
};

bool lps_membership_bounded(const LinearPathScheme& s, const Vec& x, const Vec& y,
                            long long bound);

struct FlatWitness {
    std::vector<std::vector<EdgeId>> words;
};

using ConfigRel = std::set<std::pair<Configuration, Configuration>>;

struct WordFlatVerdict {
    bool included = false;
    std::optional<std::pair<Configuration, Configuration>> missing;
};

// Checks R subset of ->w1* . ... . ->wr* over configurations <= bound
// (word applications keep every intermediate within the bound, so the
// computed right-hand side only grows with the bound).
WordFlatVerdict word_flat_check(const Pvass& m, const FlatWitness& fw, const ConfigRel& r,
                                long long bound);

// The bounded reachability relation between two states as configuration
// pairs, for feeding word_flat_check.
ConfigRel section_config_pairs(const Section& s, long long bound);

// The 6d-counter intersection machine: guesses the free input, snapshots
// it, runs the model on the first d counters, accumulates one semilinear
// component on the middle block, then drains matching counter pairs in
// fixed coordinate order into the result block. The returned section has
// input dimension 0 and exposes (x, b_t, y) on its free output suffix.
Section intersect_section_semilinear(const Section& x, const SemilinearSet& s);

// Evaluates the intersection machine at the given bound and reshapes the
// output back into (input, output) pairs of the original section's shape.
BoundedRel intersection_relation_bounded(const Section& x, const SemilinearSet& s,
                                         long long bound);

// One-hot state block followed by the counters; the encoding used for
// semilinear sets over configurations.
Vec encode_configuration(const Pvass& m, const Configuration& c);

struct InvariantVerdict {
    bool inductive = false;
    std::optional<std::pair<Configuration, EdgeId>> counterexample;
};

// Sweeps every configuration <= bound that lies in S and checks that each
// applicable edge stays in S (successor membership is exact, not bounded).
// Ok means inductive up to the bound; a counterexample is definitive.
InvariantVerdict inductive_invariant_check(const Pvass& m, const SemilinearSet& s,
                                           long long bound);

struct SeparatorVerdict {
    bool source_in = false;
    bool target_out = false;
    InvariantVerdict invariant;
    bool ok() const { return source_in && target_out && invariant.inductive; }
};

SeparatorVerdict separator_check(const Pvass& m, const SemilinearSet& s,
                                 const Configuration& c_s, const Configuration& c_t,
                                 long long bound);

} // namespace pvk
