#pragma once

#include "alambda/mashup.hpp"

namespace alambda {

/// Everything needed to certify that an algebraic reduction between pure
/// endpoints collapses to an ordinary β-reduction: the original trace, the
/// derivation after each step (the first one is refl of the source), and the
/// extracted β-trace.
struct ConservativityCertificate {
    PurePtr source;
    PurePtr target;
    AlgTrace alg;
    std::vector<DerivPtr> derivations;
    BetaTrace beta;
};

/// Turn σ-steps into a replayable β-trace: start from reflexivity, push the
/// derivation through every algebraic step, then extract. Requires a positive
/// semiring, a valid trace, and pure endpoints.
ConservativityCertificate conserve(const AlgTrace& trace);

/// Witnesses for the equivalence of two pure terms inside the algebraic
/// calculus: a join of their embeddings, the reduction of the meet to the
/// k-fold parallel reduct of the left term, and a β-trace from the right
/// term to that same parallel reduct.
struct EquivEvidence {
    std::size_t k = 0;
    JoinResult join;
    AlgebraicTerm parallel_target;
    PurePtr parallel_target_pure;
    AlgTrace meet_to_parallel;
    BetaTrace right_to_parallel;
};

std::optional<EquivEvidence> equiv_check(const PurePtr& m, const PurePtr& n,
                                         Semiring ring, long fuel,
                                         const SplitPolicy& policy);

/// A deterministic, golden-testable demo result.
struct Report {
    std::string name;
    bool ok = false;
    std::vector<std::string> lines;

    std::string to_text() const;
};

/// The support-extraction counterexample: one algebraic step on
/// (λx.(x)x)(y+z) produces (y)z inside the support extraction of the result,
/// yet no extracted term of the source reaches it. Confirms unreachability by
/// exhausting both (finite) reduction graphs.
Report claim21_counterexample();

/// Over rat+ the embedding of the pure calculus is not closed under one-step
/// reduction: a half-split step out of a pure term lands outside the image of
/// the pure fragment.
Report non_sub_ars_witness();

/// The looping combination around a fixed point of `x ↦ σ + x`: a validated
/// chain joining it with σ plus itself over nat, and over int the collapse of
/// the whole equivalence to 0 = σ.
Report inconsistency_demo(const AlgebraicTerm& sigma);

/// Complete reachable set of a pure term by exhaustive BFS; second component
/// tells whether the enumeration finished within the budget.
std::pair<std::vector<PurePtr>, bool> reachable_set(const PurePtr& m, long fuel);

} // namespace alambda
