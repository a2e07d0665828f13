#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <vector>

#include "alambda/syntax.hpp"

namespace alambda {

struct SimpleTerm;
using SimplePtr = std::shared_ptr<const SimpleTerm>;
class AlgebraicTerm;
using AlgPtr = std::shared_ptr<const AlgebraicTerm>;

/// A simple term: a variable, an abstraction of a simple term, or an
/// application whose function is simple. Only argument positions hold full
/// linear combinations — exactly the shape the linearity axioms leave intact.
struct SimpleTerm {
    enum class Kind { FreeVar, BoundVar, Lam, App };
    Kind kind;
    std::string name; // FreeVar
    int index = 0;    // BoundVar
    SimplePtr sub;    // Lam body / App fun
    AlgPtr arg;       // App argument
};

SimplePtr svar(std::string name);
SimplePtr sbound(int index);
SimplePtr slam(SimplePtr body);
SimplePtr sapp(SimplePtr fun, AlgPtr arg);

/// Total structural order: BoundVar < FreeVar < Lam < App, then children;
/// argument combinations compare as their ordered coefficient lists.
std::strong_ordering compare(const SimplePtr& a, const SimplePtr& b);
bool equal(const SimplePtr& a, const SimplePtr& b);

/// Canonical representative of an algebraic-equality class: a finite linear
/// combination of pairwise distinct simple terms with nonzero coefficients,
/// kept sorted. Two classes are equal iff the representations are identical.
class AlgebraicTerm {
public:
    using Entry = std::pair<SimplePtr, Coeff>;

    explicit AlgebraicTerm(Semiring ring) : ring_(ring) {} // the zero term
    static AlgebraicTerm singleton(SimplePtr t, Coeff c);

    /// Builds the canonical form from arbitrary (term, coefficient) pairs:
    /// sorts, merges duplicates, drops zeros.
    static AlgebraicTerm build(Semiring ring, std::vector<Entry> entries);

    Semiring ring() const { return ring_; }
    bool is_zero() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }

    Coeff coeff_of(const SimplePtr& u) const;

    AlgebraicTerm plus(const AlgebraicTerm& o) const;
    AlgebraicTerm scaled(const Coeff& a) const;

    /// Same combination with u's coefficient replaced by c (erased when 0).
    AlgebraicTerm with_coeff(const SimplePtr& u, const Coeff& c) const;

    bool operator==(const AlgebraicTerm& o) const;
    bool operator!=(const AlgebraicTerm& o) const { return !(*this == o); }

private:
    Semiring ring_;
    std::vector<Entry> entries_;
};

std::strong_ordering compare(const AlgebraicTerm& a, const AlgebraicTerm& b);

inline AlgPtr share(AlgebraicTerm t) {
    return std::make_shared<const AlgebraicTerm>(std::move(t));
}

/// Distribute λ / application over a combination in function position:
/// lam_of(Σ aᵢ.uᵢ) = Σ aᵢ.λ.uᵢ and app_of(Σ aᵢ.uᵢ, ρ) = Σ aᵢ.(uᵢ)ρ.
AlgebraicTerm lam_of(const AlgebraicTerm& body);
AlgebraicTerm app_of(const AlgebraicTerm& fun, const AlgebraicTerm& arg);

/// The unique canonical form of the algebraic-equality class of a raw term.
AlgebraicTerm canonicalize(const RawPtr& t, Semiring ring);

/// Read a canonical form back as a raw term (sum of scaled simple terms in
/// canonical order); canonicalize(readback(s)) == s.
RawPtr readback(const AlgebraicTerm& s);
RawPtr readback(const SimplePtr& u);

/// Canonical textual rendering; `1.` omitted, the zero term prints as `0`.
std::string print(const AlgebraicTerm& s);
std::string print(const SimplePtr& u);

/// Pure terms are simple; embed(m) is the singleton combination 1.m.
SimplePtr embed_simple(const PurePtr& m, Semiring ring);
AlgebraicTerm embed(const PurePtr& m, Semiring ring);

std::optional<PurePtr> simple_to_pure(const SimplePtr& u);

/// Inverse of embed where it exists: singleton support, coefficient 1, and
/// all argument positions recursively of the same shape.
std::optional<PurePtr> as_pure(const AlgebraicTerm& s);

void collect_free_vars(const SimplePtr& u, std::set<std::string>& out);
void collect_free_vars(const AlgebraicTerm& s, std::set<std::string>& out);

bool locally_closed(const SimplePtr& u);
bool locally_closed(const AlgebraicTerm& s);

/// Re-tag every coefficient (including inside argument positions) into
/// another semiring; nullopt when some value is not representable there.
std::optional<SimplePtr> convert_ring(const SimplePtr& u, Semiring target);
std::optional<AlgebraicTerm> convert_ring(const AlgebraicTerm& s, Semiring target);

/// Substitution of a combination for a free variable, extended linearly
/// over the support with the original coefficients.
AlgebraicTerm subst(const SimplePtr& u, const std::string& x, const AlgebraicTerm& r);
AlgebraicTerm subst(const AlgebraicTerm& s, const std::string& x, const AlgebraicTerm& r);

/// β-instantiation: replace bound index 0 of a λ-body with a combination.
AlgebraicTerm instantiate(const SimplePtr& body, const AlgebraicTerm& arg);
AlgebraicTerm instantiate(const AlgebraicTerm& body, const AlgebraicTerm& arg);

/// Structure-preserving renaming bv `depth` -> free x (no merging possible).
SimplePtr open_simple(const SimplePtr& body, const std::string& x, int depth = 0);
AlgebraicTerm open_alg(const AlgebraicTerm& body, const std::string& x, int depth = 0);

/// Abstract free x into bound index `depth` (for wrapping under a λ).
SimplePtr close_simple(const SimplePtr& t, const std::string& x, int depth = 0);
AlgebraicTerm close_alg(const AlgebraicTerm& t, const std::string& x, int depth = 0);

std::vector<SimplePtr> support(const AlgebraicTerm& s);

/// Λ(σ): every pure term obtained by keeping exactly one support element of
/// each combination occurring in σ. Sorted, duplicate-free. An empty
/// combination in argument position admits no choice, so it contributes ∅.
std::vector<PurePtr> lambda_support(const AlgebraicTerm& s);

int term_size(const SimplePtr& u);
int term_size(const AlgebraicTerm& s);

} // namespace alambda
