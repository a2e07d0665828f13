#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alambda/reduction.hpp"

namespace alambda {

// The mashup relations pair a pure λ-term M with terms assembled from several
// of its reductions: a strong judgement M ⊢ u against a simple term, and a
// weak judgement M ⊪ σ against a combination. Derivations embed a full
// β-trace for every reduction premise, so checking needs no search and trace
// extraction is pure concatenation.

class Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

/// A node of a derivation tree. Rules V / Lam / App conclude a strong
/// judgement (simple right-hand side); Zero / Plus conclude a weak one:
///
///   (v)    M →* x                      gives  M ⊢ x
///   (λ)    M →* λx.N  and  N ⊢ τ       gives  M ⊢ λx.τ
///   (a)    M →* (N)P, N ⊢ τ, P ⊪ ρ     gives  M ⊢ (τ)ρ
///   (0)                                gives  M ⊪ 0
///   (+)    M ⊢ τ  and  M ⊪ ρ           gives  M ⊪ a.τ + ρ
class Derivation {
public:
    enum class Rule { V, Lam, App, Zero, Plus };

    Rule rule;
    PurePtr subject;
    Semiring ring;
    BetaTrace trace;            // V / Lam / App
    std::string binder;         // Lam: the name the λ-body was opened with
    DerivPtr child1;            // Lam body ⊢ / App fun ⊢ / Plus ⊢
    DerivPtr child2;            // App arg ⊪ / Plus ⊪
    std::optional<Coeff> coeff; // Plus
};

DerivPtr deriv_v(PurePtr subject, Semiring ring, BetaTrace trace);
DerivPtr deriv_lam(PurePtr subject, Semiring ring, BetaTrace trace,
                   std::string binder, DerivPtr body);
DerivPtr deriv_app(PurePtr subject, Semiring ring, BetaTrace trace,
                   DerivPtr fun, DerivPtr arg);
DerivPtr deriv_zero(PurePtr subject, Semiring ring);
DerivPtr deriv_plus(PurePtr subject, Coeff coeff, DerivPtr strong, DerivPtr weak);

/// What a derivation concludes.
struct Judgement {
    PurePtr subject;
    bool strong; // M ⊢ rhs_simple vs M ⊪ rhs_alg
    SimplePtr rhs_simple;
    std::optional<AlgebraicTerm> rhs_alg;

    std::string str() const;
};

/// Shape-level conclusion (uses trace endpoints without replaying them);
/// nullopt when the node structure does not fit its rule.
std::optional<Judgement> conclusion_of(const DerivPtr& d);

struct CheckResult {
    bool valid = false;
    std::optional<Judgement> conclusion; // set when valid
    std::vector<int> path;               // child indices to the offending node
    std::string reason;
};

/// Full structural validation: every node against its rule, every embedded
/// trace replayed, every conclusion recomputed. Reports problems as verdicts,
/// never as exceptions.
CheckResult check(const DerivPtr& d);

/// Bounded bottom-up proof search. Weak goals decompose through the support;
/// strong goals enumerate reducts of the subject by BFS, matching the
/// required head shape. One fuel budget is shared across the whole call and
/// counts expanded nodes; nullopt means Unknown, and success is monotone in
/// fuel. Goals must be locally closed.
std::optional<DerivPtr> prove(const PurePtr& m, const AlgebraicTerm& goal, long fuel);
std::optional<DerivPtr> prove(const PurePtr& m, const SimplePtr& goal, Semiring ring,
                              long fuel);

/// The two directions of the support decomposition: a weak derivation yields
/// one strong derivation per support element, and conversely strong
/// derivations for every support element reassemble into a weak one.
std::vector<std::pair<SimplePtr, DerivPtr>> support_split(const DerivPtr& d);
DerivPtr support_join(const PurePtr& m, const AlgebraicTerm& target,
                      const std::vector<std::pair<SimplePtr, DerivPtr>>& parts);

/// Admissible rules, built constructively from the primitive ones:
///   (s)  ⊢ to ⊪ via σ = 1.σ + 0;
///   (λ') (a') (+')  as (λ) (a) (+) but with weak premises, by splitting the
///   support, applying the primitive rule per element, and rejoining.
DerivPtr admissible_s(const DerivPtr& strong);
DerivPtr admissible_lam(const BetaTrace& trace, const std::string& binder,
                        const DerivPtr& weak_body);
DerivPtr admissible_app(const BetaTrace& trace, const DerivPtr& weak_fun,
                        const DerivPtr& weak_arg);
DerivPtr admissible_plus(const Coeff& a, const DerivPtr& weak1, const DerivPtr& weak2);

/// M ⊪ M for every pure M, by structural induction with empty traces.
DerivPtr refl(const PurePtr& m, Semiring ring);
DerivPtr refl_strong(const PurePtr& m, Semiring ring);

/// When the right-hand side is the embedding of a pure term N, a derivation
/// collapses into an ordinary β-trace from the subject to N.
BetaTrace extract(const DerivPtr& d, const PurePtr& n);

/// Prepend a reduction M →* M' to a derivation about M'.
DerivPtr precompose(const BetaTrace& trace, const DerivPtr& d);

/// Substitution transformer: from M ⊢/⊪ σ and P ⊪ ρ to M[P/x] ⊪ σ[ρ/x].
DerivPtr subst_derivation(const DerivPtr& dm, const std::string& x, const DerivPtr& dp);

/// Step transformer: from M ⊪ σ and one step σ ~→ σ' to M ⊪ σ'. Requires a
/// positive semiring (the selected element must be in the support).
DerivPtr step_derivation(const DerivPtr& dm, const AlgStep& step);

/// Strong variant: from M ⊢ τ and one step τ → τ' to M ⊪ τ'.
DerivPtr step_derivation_strong(const DerivPtr& dm, const SimpleStep& step);

/// Rename a free variable everywhere in a derivation (subjects, traces,
/// conclusions); stops below a node that re-binds the same name.
DerivPtr rename_free(const DerivPtr& d, const std::string& from, const std::string& to);

} // namespace alambda
