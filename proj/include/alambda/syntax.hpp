#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "alambda/semiring.hpp"

namespace alambda {

// Terms are stored locally nameless: bound variables are binder-depth
// indices, free variables are names. Surface names exist only at the
// parse/print boundaries, so alpha-equivalence is structural equality and
// substitution can never capture.

struct PureTerm;
using PurePtr = std::shared_ptr<const PureTerm>;

/// A pure λ-term: the Var/Lam/App fragment, locally nameless.
struct PureTerm {
    enum class Kind { FreeVar, BoundVar, Lam, App };
    Kind kind;
    std::string name; // FreeVar
    int index = 0;    // BoundVar
    PurePtr left;     // Lam body / App fun
    PurePtr right;    // App arg
};

PurePtr pvar(std::string name);
PurePtr pbound(int index);
PurePtr plam(PurePtr body);
PurePtr papp(PurePtr fun, PurePtr arg);

bool equal(const PurePtr& a, const PurePtr& b);
std::strong_ordering compare(const PurePtr& a, const PurePtr& b);

/// No dangling de Bruijn index; every stored term visible through the public
/// API satisfies this.
bool locally_closed(const PurePtr& t);

void collect_free_vars(const PurePtr& t, std::set<std::string>& out);
std::set<std::string> free_vars(const PurePtr& t);

/// Replace bound index 0 of a λ-body with a free variable / a term.
PurePtr open_var(const PurePtr& body, const std::string& x);
PurePtr instantiate(const PurePtr& body, const PurePtr& arg);

/// Inverse of open_var: abstract free occurrences of x into index 0.
PurePtr close_var(const PurePtr& t, const std::string& x);

PurePtr subst_free(const PurePtr& t, const std::string& x, const PurePtr& p);

int term_size(const PurePtr& t);

struct RawTerm;
using RawPtr = std::shared_ptr<const RawTerm>;

/// A raw term of the algebraic calculus before quotienting: variables,
/// abstraction, application, the empty combination 0, binary sums, and
/// scalar multiples.
struct RawTerm {
    enum class Kind { FreeVar, BoundVar, Lam, App, Zero, Sum, Scale };
    Kind kind;
    std::string name;           // FreeVar
    int index = 0;              // BoundVar
    RawPtr left;                // Lam body / App fun / Sum left / Scale body
    RawPtr right;               // App arg / Sum right
    std::optional<Coeff> coeff; // Scale
};

RawPtr rvar(std::string name);
RawPtr rbound(int index);
RawPtr rlam(RawPtr body);
RawPtr rapp(RawPtr fun, RawPtr arg);
RawPtr rzero();
RawPtr rsum(RawPtr left, RawPtr right);
RawPtr rscale(Coeff c, RawPtr body);

/// α-equivalence: structural identity of the nameless forms (coefficients
/// compare exactly, including their semiring tag).
bool alpha_eq(const RawPtr& a, const RawPtr& b);
std::strong_ordering compare(const RawPtr& a, const RawPtr& b);

/// True iff t lies in the Var/Lam/App fragment (no Zero/Sum/Scale anywhere,
/// not even Scale with coefficient 1).
bool is_pure(const RawPtr& t);

std::optional<PurePtr> to_pure(const RawPtr& t);
RawPtr from_pure(const PurePtr& t);

void collect_free_vars(const RawPtr& t, std::set<std::string>& out);
int term_size(const RawPtr& t);

/// Parse the exact surface grammar:
///
///   term   ::= sum
///   sum    ::= scale ( '+' scale )*
///   scale  ::= coeff '.' scale | app
///   app    ::= atom+
///   atom   ::= var | '0' | 'λ' var '.' term | '\' var '.' term
///            | '(' term ')' atom?
///   var    ::= [a-zA-Z_][a-zA-Z0-9_']*
///
/// `λ` and `\` are interchangeable; application also accepts juxtaposition
/// with left associativity. Coefficient literals follow the active semiring.
/// Throws ParseError with 1-based line/column on rejection.
RawPtr parse(std::string_view text, Semiring ring);

/// parse + to_pure; UsageError when the term has algebraic nodes.
PurePtr parse_pure(std::string_view text, Semiring ring = Semiring::Nat);

/// Krivine-style printer: applications as `(M)N`, scaling as `a.M`.
/// parse(print(t)) is α-equivalent to t.
std::string print(const RawPtr& t);
std::string print(const PurePtr& t);

/// First name not contained in `avoid` from a fixed, deterministic sequence.
std::string fresh_name(const std::set<std::string>& avoid);

} // namespace alambda
