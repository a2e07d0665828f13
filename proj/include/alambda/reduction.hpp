#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "alambda/algebra.hpp"

namespace alambda {

// ---------------------------------------------------------------------------
// β-reduction on pure terms

/// Path from the root: 0 = λ-body / application function, 1 = argument.
using Pos = std::vector<int>;

struct BetaStep {
    Pos pos;        // redex position in the predecessor
    PurePtr result; // term after contracting it
};

/// Step-by-step witness of M →* N.
struct BetaTrace {
    PurePtr start;
    std::vector<BetaStep> steps;

    const PurePtr& end() const { return steps.empty() ? start : steps.back().result; }
};

/// All one-step β-reducts with their redex positions, leftmost-outermost
/// first (a redex is listed before any redex inside it, function side before
/// argument side).
std::vector<std::pair<Pos, PurePtr>> beta_reducts(const PurePtr& m);

/// Contract the redex at `pos`, or nullopt when there is none there.
std::optional<PurePtr> contract_at(const PurePtr& m, const Pos& pos);

/// Replay every step from scratch.
bool validate(const BetaTrace& t);

/// Breadth-first reachability search, spending one unit of fuel per expanded
/// node. nullopt means Unknown: the budget ran out or the finite reduction
/// graph was exhausted — reachability is only semi-decidable, so this is
/// never a definite "no".
std::optional<BetaTrace> beta_reaches(const PurePtr& m, const PurePtr& n, long fuel);

// ---------------------------------------------------------------------------
// One-step reduction of simple and algebraic terms

struct AlgStep;
using AlgStepPtr = std::shared_ptr<const AlgStep>;

/// Shape of one step of the contextual reduction of a simple term: a head
/// β-contraction, or a step inside the λ-body, the function position, or
/// (as one algebraic step) the argument position.
struct SimpleStep {
    enum class Kind { HeadBeta, InLamBody, InAppFun, InAppArg };
    Kind kind = Kind::HeadBeta;
    std::shared_ptr<const SimpleStep> inner; // InLamBody / InAppFun
    AlgStepPtr inner_alg;                    // InAppArg
};
using SimpleStepPtr = std::shared_ptr<const SimpleStep>;

SimpleStepPtr step_head_beta();
SimpleStepPtr step_in_lam(SimpleStepPtr inner);
SimpleStepPtr step_in_fun(SimpleStepPtr inner);
SimpleStepPtr step_in_arg(AlgStepPtr inner);

/// One algebraic step σ = a.τ + ρ ~→ a.τ' + ρ. The residual coefficient b
/// (with a + b equal to σ's coefficient of τ) pins ρ down exactly — over a
/// non-positive semiring the decomposition is not recoverable from σ alone.
struct AlgStep {
    SimplePtr selected;   // τ
    Coeff split;          // a, nonzero
    Coeff residual;       // b
    SimpleStepPtr inner;  // how τ reduces
};

/// Rename bound index 0 to the free variable x inside the step's embedded
/// terms (used when recursing under a binder).
SimpleStepPtr open_step(const SimpleStepPtr& s, const std::string& x);

/// τ' for a step on τ; nullopt when the step does not fit the term.
std::optional<AlgebraicTerm> apply_step(const SimplePtr& t, const SimpleStep& s,
                                        Semiring ring);

/// a.τ' + ρ for a step on σ; validates a ≠ 0 and a + b = σ(τ).
std::optional<AlgebraicTerm> apply_step(const AlgebraicTerm& s, const AlgStep& step);

/// How coefficients may be decomposed as c = a + b when selecting weight for
/// a step. Full (a = c) is always enumerated; Unit adds every integer split
/// of a Nat coefficient up to unit_cap; Half adds a = c/2 over rat+. The
/// relation itself quantifies over all decompositions — these named policies
/// are a documented finite approximation.
struct SplitPolicy {
    enum class Name { Full, Unit, Half };
    Name name = Name::Full;
    unsigned long unit_cap = 8;
};

std::optional<SplitPolicy::Name> split_policy_from_name(std::string_view s);
std::string_view split_policy_name(SplitPolicy::Name n);
bool split_policy_valid(SplitPolicy::Name n, Semiring ring);

/// The (a, b) decompositions of c enumerated by the policy, full split first.
std::vector<std::pair<Coeff, Coeff>> enumerate_splits(const Coeff& c,
                                                      const SplitPolicy& policy);

/// All one-step reducts of a simple term, leftmost-outermost first; the
/// policy only matters for nested steps in argument positions.
std::vector<std::pair<SimpleStepPtr, AlgebraicTerm>>
simple_reducts(const SimplePtr& t, Semiring ring, const SplitPolicy& policy = {});

/// All one-step reducts of an algebraic term: for every support element, split
/// enumerated by the policy, and reduct of the selected element.
std::vector<std::pair<AlgStep, AlgebraicTerm>>
alg_reducts(const AlgebraicTerm& s, const SplitPolicy& policy = {});

/// Step-by-step witness of σ ~→* σ'.
struct AlgTraceStep {
    AlgStep step;
    AlgebraicTerm reduct; // τ'
    AlgebraicTerm result; // a.τ' + ρ
};

struct AlgTrace {
    AlgebraicTerm start;
    std::vector<AlgTraceStep> steps;

    const AlgebraicTerm& end() const {
        return steps.empty() ? start : steps.back().result;
    }
};

/// Revalidate every step from scratch: split arithmetic, the recorded τ',
/// and the canonical recombination.
bool validate(const AlgTrace& t);

// ---------------------------------------------------------------------------
// Parallel reduction and normal forms

/// Full parallel reduct: contract all current β-redexes simultaneously
/// (a head redex contracts after both sides have been reduced in parallel).
PurePtr parallel_reduce(const PurePtr& m);
AlgebraicTerm parallel_reduce_simple(const SimplePtr& t, Semiring ring);
AlgebraicTerm parallel_reduce(const AlgebraicTerm& s);

/// True iff no support element admits a reduct. Over a positive semiring
/// this coincides with ~→-normality; refuses Int, where it would not.
bool is_normal(const AlgebraicTerm& s);

// ---------------------------------------------------------------------------
// Reachability and joinability searches

/// BFS forward search for a specific canonical form.
std::optional<AlgTrace> alg_reaches(const AlgebraicTerm& from, const AlgebraicTerm& to,
                                    long fuel, const SplitPolicy& policy = {});

struct JoinResult {
    AlgebraicTerm meet;
    AlgTrace left;  // from the first term to the meet
    AlgTrace right; // from the second term to the meet
};

/// Bidirectional BFS for a common reduct; nullopt is Unknown (budget spent
/// or both finite graphs exhausted without meeting).
std::optional<JoinResult> joinable(const AlgebraicTerm& s, const AlgebraicTerm& t,
                                   long fuel, const SplitPolicy& policy = {});

} // namespace alambda
