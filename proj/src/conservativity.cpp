#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "alambda/conservativity.hpp"

namespace alambda {

ConservativityCertificate conserve(const AlgTrace& trace) {
    Semiring ring = trace.start.ring();
    if (!is_positive(ring))
        throw UsageError("conserve: needs a positive semiring");
    if (!validate(trace)) throw UsageError("conserve: trace does not validate");
    auto source = as_pure(trace.start);
    if (!source) throw UsageError("conserve: trace does not start at a pure term");
    auto target = as_pure(trace.end());
    if (!target) throw UsageError("conserve: trace does not end at a pure term");

    std::vector<DerivPtr> derivations;
    DerivPtr d = refl(*source, ring);
    derivations.push_back(d);
    for (const auto& s : trace.steps) {
        d = step_derivation(d, s.step);
        derivations.push_back(d);
    }
    BetaTrace beta = extract(d, *target);
    return ConservativityCertificate{*source, *target, trace, std::move(derivations),
                                     std::move(beta)};
}

std::optional<EquivEvidence> equiv_check(const PurePtr& m, const PurePtr& n,
                                         Semiring ring, long fuel,
                                         const SplitPolicy& policy) {
    if (!is_positive(ring)) throw UsageError("equiv_check: needs a positive semiring");
    auto join = joinable(embed(m, ring), embed(n, ring), fuel, policy);
    if (!join) return std::nullopt;
    std::size_t k = join->left.steps.size();
    AlgebraicTerm target = embed(m, ring);
    PurePtr target_pure = m;
    for (std::size_t i = 0; i < k; ++i) {
        target = parallel_reduce(target);
        target_pure = parallel_reduce(target_pure);
    }
    auto to_parallel = alg_reaches(join->meet, target, fuel, policy);
    if (!to_parallel) return std::nullopt;
    auto beta = beta_reaches(n, target_pure, fuel);
    if (!beta) return std::nullopt;
    EquivEvidence ev{k, std::move(*join), std::move(target), target_pure,
                     std::move(*to_parallel), std::move(*beta)};
    return ev;
}

std::string Report::to_text() const {
    std::ostringstream os;
    for (const auto& l : lines) os << l << "\n";
    os << "verdict: " << (ok ? "confirmed" : "FAILED") << "\n";
    return os.str();
}

std::pair<std::vector<PurePtr>, bool> reachable_set(const PurePtr& m, long fuel) {
    auto less = [](const PurePtr& a, const PurePtr& b) { return compare(a, b) < 0; };
    std::set<PurePtr, decltype(less)> visited(less);
    std::deque<PurePtr> frontier{m};
    visited.insert(m);
    bool complete = true;
    while (!frontier.empty()) {
        if (fuel-- <= 0) {
            complete = false;
            break;
        }
        PurePtr cur = frontier.front();
        frontier.pop_front();
        for (auto& [pos, r] : beta_reducts(cur)) {
            if (visited.insert(r).second) frontier.push_back(r);
        }
    }
    return {std::vector<PurePtr>(visited.begin(), visited.end()), complete};
}

namespace {

std::string render_set(const std::vector<PurePtr>& ts) {
    std::ostringstream os;
    os << "{ ";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i) os << ", ";
        os << print(ts[i]);
    }
    os << " }";
    return os.str();
}

bool contains(const std::vector<PurePtr>& ts, const PurePtr& t) {
    return std::any_of(ts.begin(), ts.end(),
                       [&](const PurePtr& u) { return equal(u, t); });
}

std::string render_alg_step(const AlgTraceStep& s) {
    std::ostringstream os;
    os << "select " << s.step.split.str() << " of [" << print(s.step.selected)
       << "] (residual " << s.step.residual.str() << ")  ~>  " << print(s.result);
    return os.str();
}

} // namespace

Report claim21_counterexample() {
    Semiring R = Semiring::Nat;
    Report r;
    r.name = "claim21";
    bool ok = true;

    AlgebraicTerm sigma = canonicalize(parse("(λx.(x)x)(y+z)", R), R);
    r.lines.push_back("semiring: nat");
    r.lines.push_back("sigma  = " + print(sigma));

    auto reducts = alg_reducts(sigma, {});
    ok = ok && reducts.size() == 1;
    AlgebraicTerm sigma2 = reducts.empty() ? sigma : reducts[0].second;
    r.lines.push_back("sigma ~> sigma' = " + print(sigma2));
    AlgebraicTerm expected2 = canonicalize(parse("(y+z)(y+z)", R), R);
    ok = ok && sigma2 == expected2;

    auto ls = lambda_support(sigma);
    auto ls2 = lambda_support(sigma2);
    r.lines.push_back("extracted(sigma)  = " + render_set(ls));
    r.lines.push_back("extracted(sigma') = " + render_set(ls2));

    PurePtr mprime = parse_pure("(y)z");
    bool inside = contains(ls2, mprime);
    ok = ok && inside;
    r.lines.push_back(std::string("(y)z in extracted(sigma'): ") +
                      (inside ? "yes" : "NO"));

    const long fuel = 100;
    r.lines.push_back("reachability budget per source term: " + std::to_string(fuel));
    for (const auto& m : ls) {
        auto [reach, complete] = reachable_set(m, fuel);
        bool hits = contains(reach, mprime);
        ok = ok && complete && !hits;
        r.lines.push_back("from " + print(m) + ": reachable " + render_set(reach) +
                          (complete ? " (complete)" : " (REACHED BUDGET)") +
                          ", contains (y)z: " + (hits ? "YES" : "no"));
    }
    r.lines.push_back("no extracted term of sigma beta-reduces to (y)z, although "
                      "(y)z is extracted from sigma'");
    r.ok = ok;
    return r;
}

Report non_sub_ars_witness() {
    Semiring R = Semiring::NonnegRat;
    Report r;
    r.name = "subars";
    bool ok = true;

    PurePtr m = parse_pure("(λx.x)y");
    AlgebraicTerm em = embed(m, R);
    r.lines.push_back("semiring: rat+");
    r.lines.push_back("M = " + print(m) + "   (one-step reduct: y)");
    auto back = as_pure(em);
    ok = ok && back && equal(*back, m);
    r.lines.push_back("embedding of M: " + print(em) + "  (recovers M: " +
                      (back ? "yes" : "NO") + ")");

    SplitPolicy half{SplitPolicy::Name::Half};
    auto reducts = alg_reducts(em, half);
    // keep the step that moves only half of the weight
    std::optional<std::pair<AlgStep, AlgebraicTerm>> chosen;
    for (auto& c : reducts) {
        if (!c.first.residual.is_zero()) {
            chosen = c;
            break;
        }
    }
    ok = ok && chosen.has_value();
    if (chosen) {
        r.lines.push_back("half-split step: select " + chosen->first.split.str() +
                          " of [" + print(chosen->first.selected) + "]");
        r.lines.push_back("result: " + print(chosen->second));
        AlgebraicTerm expected =
            embed(m, R).scaled(Coeff::from_fraction(1, 2))
                .plus(embed(parse_pure("y"), R).scaled(Coeff::from_fraction(1, 2)));
        ok = ok && chosen->second == expected;
        bool nonpure = !as_pure(chosen->second).has_value();
        ok = ok && nonpure;
        r.lines.push_back(std::string("result is the embedding of a pure term: ") +
                          (nonpure ? "no" : "YES"));
    }
    r.lines.push_back("a one-step reduct of an embedded pure term escapes the pure "
                      "fragment, so the pure calculus is not a rewriting subsystem "
                      "in the strong sense");
    r.ok = ok;
    return r;
}

namespace {

// Contract head redexes of `selections` in order, always moving the whole
// current weight of the selected element.
AlgTrace run_full_headbeta_script(const AlgebraicTerm& start,
                                  const std::vector<SimplePtr>& selections) {
    AlgTrace trace{start, {}};
    AlgebraicTerm cur = start;
    for (const auto& u : selections) {
        AlgStep step{u, cur.coeff_of(u), Coeff::zero(cur.ring()), step_head_beta()};
        auto reduct = apply_step(u, *step.inner, cur.ring());
        auto next = apply_step(cur, step);
        if (!reduct || !next)
            throw UsageError("inconsistency chain: scripted step does not apply");
        trace.steps.push_back({step, *reduct, *next});
        cur = *next;
    }
    return trace;
}

// Same selections, but with explicit split weights; the residual is whatever
// remains of the current coefficient (possibly negative over int).
AlgTrace run_script_with_splits(const AlgebraicTerm& start,
                                const std::vector<std::pair<SimplePtr, Coeff>>& sel) {
    AlgTrace trace{start, {}};
    AlgebraicTerm cur = start;
    for (const auto& [u, a] : sel) {
        auto b = cur.coeff_of(u).minus_part(a);
        if (!b) throw UsageError("inconsistency chain: split not realizable");
        AlgStep step{u, a, *b, step_head_beta()};
        auto reduct = apply_step(u, *step.inner, cur.ring());
        auto next = apply_step(cur, step);
        if (!reduct || !next)
            throw UsageError("inconsistency chain: scripted step does not apply");
        trace.steps.push_back({step, *reduct, *next});
        cur = *next;
    }
    return trace;
}

} // namespace

Report inconsistency_demo(const AlgebraicTerm& sigma) {
    if (sigma.ring() != Semiring::Nat)
        throw UsageError("inconsistency_demo: give sigma over nat");
    Report r;
    r.name = "inconsistency";
    bool ok = true;

    // Curry's fixed point combinator
    PurePtr y_comb = parse_pure("λf.(λx.(f)(x)x)λx.(f)(x)x");
    RawPtr a_raw = rlam(rsum(readback(sigma), rbound(0))); // λx.(sigma + x)
    RawPtr inf_raw = rapp(from_pure(y_comb), a_raw);
    AlgebraicTerm infinity = canonicalize(inf_raw, Semiring::Nat);
    r.lines.push_back("sigma = " + print(sigma));
    r.lines.push_back("fixed point combinator Y = " + print(y_comb));
    r.lines.push_back("inf = (Y)λx.(sigma + x) = " + print(infinity));
    ok = ok && infinity.support_size() == 1;
    SimplePtr inf_elem = infinity.entries()[0].first;

    // --- nat: inf ~>* sigma + theta  and  sigma + inf ~> sigma + theta -----
    // Phase plan: unfold the fixed point once, then contract every support
    // element of the unfolding, then contract every element of what remains;
    // the selections are collected by replaying those phases.
    std::vector<SimplePtr> selections{inf_elem};
    {
        AlgStep s0{inf_elem, Coeff::one(Semiring::Nat), Coeff::zero(Semiring::Nat),
                   step_head_beta()};
        auto theta = apply_step(infinity, s0);
        if (!theta) throw UsageError("inconsistency_demo: Y-unfolding failed");
        for (const auto& [u, c] : theta->entries()) selections.push_back(u);
        AlgebraicTerm after = *theta;
        for (std::size_t i = 1; i < selections.size(); ++i) {
            AlgStep s{selections[i], after.coeff_of(selections[i]),
                      Coeff::zero(Semiring::Nat), step_head_beta()};
            auto next = apply_step(after, s);
            if (!next) throw UsageError("inconsistency_demo: unfolding step failed");
            after = *next;
        }
        for (const auto& [u, c] : after.entries()) selections.push_back(u);
    }
    AlgTrace left = run_full_headbeta_script(infinity, selections);
    AlgebraicTerm sigma_plus_inf = sigma.plus(infinity);
    AlgTrace right = run_full_headbeta_script(sigma_plus_inf, {inf_elem});
    ok = ok && validate(left) && validate(right);
    ok = ok && left.end() == right.end();

    r.lines.push_back("-- nat chain: inf <-> sigma + inf --");
    r.lines.push_back("forward from inf:");
    for (const auto& s : left.steps) r.lines.push_back("  " + render_alg_step(s));
    r.lines.push_back("forward from sigma + inf = " + print(sigma_plus_inf) + ":");
    for (const auto& s : right.steps) r.lines.push_back("  " + render_alg_step(s));
    r.lines.push_back("meet: " + print(left.end()) +
                      (left.end() == right.end() ? "  (chains agree)"
                                                 : "  (CHAINS DISAGREE)"));

    // --- int: 0 = inf + (-1).inf <-> sigma ---------------------------------
    auto sigma_int = convert_ring(sigma, Semiring::Int);
    auto inf_int = convert_ring(infinity, Semiring::Int);
    if (!sigma_int || !inf_int)
        throw UsageError("inconsistency_demo: conversion to int failed");
    SimplePtr inf_elem_int = inf_int->entries()[0].first;
    Coeff minus_one = Coeff::from_long(Semiring::Int, -1);

    AlgebraicTerm zero_int = inf_int->plus(inf_int->scaled(minus_one));
    ok = ok && zero_int.is_zero();
    r.lines.push_back("-- int collapse --");
    r.lines.push_back("inf + (-1).inf canonicalizes to: " + print(zero_int));

    AlgebraicTerm sigma_side = sigma_int->plus(*inf_int).plus(inf_int->scaled(minus_one));
    ok = ok && sigma_side == *sigma_int;
    r.lines.push_back("sigma + inf + (-1).inf canonicalizes to: " + print(sigma_side));

    std::vector<std::pair<SimplePtr, Coeff>> sel_int;
    for (std::size_t i = 0; i < selections.size(); ++i) {
        auto u = convert_ring(selections[i], Semiring::Int);
        if (!u) throw UsageError("inconsistency_demo: conversion to int failed");
        sel_int.emplace_back(*u, left.steps[i].step.split.convert(Semiring::Int).value());
    }
    AlgTrace left_int = run_script_with_splits(zero_int, sel_int);
    AlgTrace right_int = run_script_with_splits(
        *sigma_int, {{inf_elem_int, Coeff::one(Semiring::Int)}});
    ok = ok && validate(left_int) && validate(right_int);
    ok = ok && left_int.end() == right_int.end();

    r.lines.push_back("chain from 0:");
    for (const auto& s : left_int.steps) r.lines.push_back("  " + render_alg_step(s));
    r.lines.push_back("chain from sigma = " + print(*sigma_int) + ":");
    for (const auto& s : right_int.steps) r.lines.push_back("  " + render_alg_step(s));
    r.lines.push_back("meet: " + print(left_int.end()) +
                      (left_int.end() == right_int.end() ? "  (chains agree)"
                                                         : "  (CHAINS DISAGREE)"));
    r.lines.push_back("over int the equivalence identifies 0 with sigma: the "
                      "rewriting theory is inconsistent without positivity");
    r.ok = ok;
    return r;
}

} // namespace alambda
