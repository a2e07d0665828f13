#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "alambda/mashup.hpp"

namespace alambda {

namespace {

struct PureLess {
    bool operator()(const PurePtr& a, const PurePtr& b) const {
        return compare(a, b) < 0;
    }
};

BetaTrace concat(const BetaTrace& a, const BetaTrace& b) {
    if (!equal(a.end(), b.start))
        throw UsageError("trace concatenation: endpoints do not meet");
    BetaTrace out{a.start, a.steps};
    out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
    return out;
}

Pos prefixed(int head, const Pos& rest) {
    Pos out{head};
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

// N →* N' lifted under a binder: λx.N →* λx.N' (terms close x back to
// index 0, positions gain a leading body step).
BetaTrace lift_lam(const BetaTrace& t, const std::string& x) {
    BetaTrace out;
    out.start = plam(close_var(t.start, x));
    for (const auto& s : t.steps)
        out.steps.push_back({prefixed(0, s.pos), plam(close_var(s.result, x))});
    return out;
}

// N →* N' lifted into function position: (N)P →* (N')P.
BetaTrace lift_app_fun(const BetaTrace& t, const PurePtr& arg) {
    BetaTrace out;
    out.start = papp(t.start, arg);
    for (const auto& s : t.steps)
        out.steps.push_back({prefixed(0, s.pos), papp(s.result, arg)});
    return out;
}

// P →* P' lifted into argument position: (N)P →* (N)P'.
BetaTrace lift_app_arg(const PurePtr& fun, const BetaTrace& t) {
    BetaTrace out;
    out.start = papp(fun, t.start);
    for (const auto& s : t.steps)
        out.steps.push_back({prefixed(1, s.pos), papp(fun, s.result)});
    return out;
}

// β-steps are stable under substitution of a locally closed term for a free
// variable: same positions, substituted endpoints.
BetaTrace subst_trace(const BetaTrace& t, const std::string& x, const PurePtr& p) {
    BetaTrace out;
    out.start = subst_free(t.start, x, p);
    for (const auto& s : t.steps)
        out.steps.push_back({s.pos, subst_free(s.result, x, p)});
    return out;
}

} // namespace

DerivPtr deriv_v(PurePtr subject, Semiring ring, BetaTrace trace) {
    auto d = std::make_shared<Derivation>();
    d->rule = Derivation::Rule::V;
    d->subject = std::move(subject);
    d->ring = ring;
    d->trace = std::move(trace);
    return d;
}

DerivPtr deriv_lam(PurePtr subject, Semiring ring, BetaTrace trace,
                   std::string binder, DerivPtr body) {
    auto d = std::make_shared<Derivation>();
    d->rule = Derivation::Rule::Lam;
    d->subject = std::move(subject);
    d->ring = ring;
    d->trace = std::move(trace);
    d->binder = std::move(binder);
    d->child1 = std::move(body);
    return d;
}

DerivPtr deriv_app(PurePtr subject, Semiring ring, BetaTrace trace,
                   DerivPtr fun, DerivPtr arg) {
    auto d = std::make_shared<Derivation>();
    d->rule = Derivation::Rule::App;
    d->subject = std::move(subject);
    d->ring = ring;
    d->trace = std::move(trace);
    d->child1 = std::move(fun);
    d->child2 = std::move(arg);
    return d;
}

DerivPtr deriv_zero(PurePtr subject, Semiring ring) {
    auto d = std::make_shared<Derivation>();
    d->rule = Derivation::Rule::Zero;
    d->subject = std::move(subject);
    d->ring = ring;
    return d;
}

DerivPtr deriv_plus(PurePtr subject, Coeff coeff, DerivPtr strong, DerivPtr weak) {
    auto d = std::make_shared<Derivation>();
    d->rule = Derivation::Rule::Plus;
    d->subject = std::move(subject);
    d->ring = coeff.ring();
    d->coeff = std::move(coeff);
    d->child1 = std::move(strong);
    d->child2 = std::move(weak);
    return d;
}

std::string Judgement::str() const {
    if (strong) return print(subject) + " |- " + print(rhs_simple);
    return print(subject) + " ||- " + print(*rhs_alg);
}

std::optional<Judgement> conclusion_of(const DerivPtr& d) {
    if (!d || !d->subject) return std::nullopt;
    switch (d->rule) {
    case Derivation::Rule::V: {
        if (!equal(d->trace.start, d->subject)) return std::nullopt;
        const PurePtr& e = d->trace.end();
        if (e->kind != PureTerm::Kind::FreeVar) return std::nullopt;
        return Judgement{d->subject, true, svar(e->name), std::nullopt};
    }
    case Derivation::Rule::Lam: {
        if (!equal(d->trace.start, d->subject)) return std::nullopt;
        const PurePtr& e = d->trace.end();
        if (e->kind != PureTerm::Kind::Lam || d->binder.empty()) return std::nullopt;
        if (free_vars(e->left).count(d->binder)) return std::nullopt; // binder fresh
        auto body = conclusion_of(d->child1);
        if (!body || !body->strong) return std::nullopt;
        if (!equal(body->subject, open_var(e->left, d->binder))) return std::nullopt;
        return Judgement{d->subject, true,
                         slam(close_simple(body->rhs_simple, d->binder)), std::nullopt};
    }
    case Derivation::Rule::App: {
        if (!equal(d->trace.start, d->subject)) return std::nullopt;
        const PurePtr& e = d->trace.end();
        if (e->kind != PureTerm::Kind::App) return std::nullopt;
        auto fun = conclusion_of(d->child1);
        auto arg = conclusion_of(d->child2);
        if (!fun || !fun->strong || !arg || arg->strong) return std::nullopt;
        if (!equal(fun->subject, e->left) || !equal(arg->subject, e->right))
            return std::nullopt;
        if (arg->rhs_alg->ring() != d->ring) return std::nullopt;
        return Judgement{d->subject, true,
                         sapp(fun->rhs_simple, share(*arg->rhs_alg)), std::nullopt};
    }
    case Derivation::Rule::Zero:
        return Judgement{d->subject, false, nullptr, AlgebraicTerm(d->ring)};
    case Derivation::Rule::Plus: {
        if (!d->coeff || d->coeff->ring() != d->ring) return std::nullopt;
        auto strong = conclusion_of(d->child1);
        auto weak = conclusion_of(d->child2);
        if (!strong || !strong->strong || !weak || weak->strong) return std::nullopt;
        if (!equal(strong->subject, d->subject) || !equal(weak->subject, d->subject))
            return std::nullopt;
        if (weak->rhs_alg->ring() != d->ring) return std::nullopt;
        return Judgement{d->subject, false, nullptr,
                         AlgebraicTerm::singleton(strong->rhs_simple, *d->coeff)
                             .plus(*weak->rhs_alg)};
    }
    }
    return std::nullopt;
}

namespace {

std::optional<Judgement> check_node(const DerivPtr& d, std::vector<int>& path,
                                    CheckResult& res) {
    auto invalid = [&](const std::string& reason) -> std::optional<Judgement> {
        if (res.reason.empty()) {
            res.path = path;
            res.reason = reason;
        }
        return std::nullopt;
    };
    if (!d || !d->subject) return invalid("missing node or subject");
    if (!locally_closed(d->subject)) return invalid("subject has dangling indices");
    bool has_trace = d->rule == Derivation::Rule::V ||
                     d->rule == Derivation::Rule::Lam ||
                     d->rule == Derivation::Rule::App;
    if (has_trace) {
        if (!equal(d->trace.start, d->subject))
            return invalid("trace does not start at the subject");
        if (!validate(d->trace)) return invalid("embedded trace does not replay");
    }
    switch (d->rule) {
    case Derivation::Rule::V: {
        if (d->trace.end()->kind != PureTerm::Kind::FreeVar)
            return invalid("trace of a variable node must end at a free variable");
        return Judgement{d->subject, true, svar(d->trace.end()->name), std::nullopt};
    }
    case Derivation::Rule::Lam: {
        const PurePtr& e = d->trace.end();
        if (e->kind != PureTerm::Kind::Lam)
            return invalid("trace of an abstraction node must end at a λ");
        if (d->binder.empty()) return invalid("abstraction node without a binder name");
        if (free_vars(e->left).count(d->binder))
            return invalid("binder name occurs free in the λ-body");
        path.push_back(0);
        auto body = check_node(d->child1, path, res);
        path.pop_back();
        if (!body) return std::nullopt;
        if (!body->strong) return invalid("λ-body premise must be a strong judgement");
        if (!equal(body->subject, open_var(e->left, d->binder)))
            return invalid("λ-body premise subject is not the opened body");
        return Judgement{d->subject, true,
                         slam(close_simple(body->rhs_simple, d->binder)), std::nullopt};
    }
    case Derivation::Rule::App: {
        const PurePtr& e = d->trace.end();
        if (e->kind != PureTerm::Kind::App)
            return invalid("trace of an application node must end at an application");
        path.push_back(0);
        auto fun = check_node(d->child1, path, res);
        path.pop_back();
        if (!fun) return std::nullopt;
        path.push_back(1);
        auto arg = check_node(d->child2, path, res);
        path.pop_back();
        if (!arg) return std::nullopt;
        if (!fun->strong) return invalid("function premise must be a strong judgement");
        if (arg->strong) return invalid("argument premise must be a weak judgement");
        if (!equal(fun->subject, e->left))
            return invalid("function premise subject mismatch");
        if (!equal(arg->subject, e->right))
            return invalid("argument premise subject mismatch");
        if (arg->rhs_alg->ring() != d->ring) return invalid("argument semiring mismatch");
        return Judgement{d->subject, true,
                         sapp(fun->rhs_simple, share(*arg->rhs_alg)), std::nullopt};
    }
    case Derivation::Rule::Zero:
        return Judgement{d->subject, false, nullptr, AlgebraicTerm(d->ring)};
    case Derivation::Rule::Plus: {
        if (!d->coeff) return invalid("sum node without a coefficient");
        if (d->coeff->ring() != d->ring) return invalid("coefficient semiring mismatch");
        path.push_back(0);
        auto strong = check_node(d->child1, path, res);
        path.pop_back();
        if (!strong) return std::nullopt;
        path.push_back(1);
        auto weak = check_node(d->child2, path, res);
        path.pop_back();
        if (!weak) return std::nullopt;
        if (!strong->strong) return invalid("first premise must be a strong judgement");
        if (weak->strong) return invalid("second premise must be a weak judgement");
        if (!equal(strong->subject, d->subject) || !equal(weak->subject, d->subject))
            return invalid("premise subjects must equal the node subject");
        if (weak->rhs_alg->ring() != d->ring) return invalid("semiring mismatch");
        return Judgement{d->subject, false, nullptr,
                         AlgebraicTerm::singleton(strong->rhs_simple, *d->coeff)
                             .plus(*weak->rhs_alg)};
    }
    }
    return invalid("unknown rule");
}

} // namespace

CheckResult check(const DerivPtr& d) {
    CheckResult res;
    std::vector<int> path;
    auto j = check_node(d, path, res);
    if (j) {
        res.valid = true;
        res.conclusion = std::move(j);
        res.reason.clear();
        res.path.clear();
    }
    return res;
}

// --------------------------------------------------------------------------
// Proof search

namespace {

struct SearchCtx {
    long fuel;
    bool exhausted = false;

    // One unit per expanded node, shared across the whole prove call. Once
    // the budget is gone everything unwinds, which keeps success monotone in
    // the initial fuel.
    bool spend() {
        if (exhausted) return false;
        if (fuel <= 0) {
            exhausted = true;
            return false;
        }
        --fuel;
        return true;
    }
};

std::optional<DerivPtr> prove_weak(const PurePtr& m, const AlgebraicTerm& goal,
                                   SearchCtx& ctx);

std::optional<DerivPtr> prove_strong(const PurePtr& m, const SimplePtr& goal,
                                     Semiring ring, SearchCtx& ctx) {
    std::map<PurePtr, std::pair<PurePtr, BetaStep>, PureLess> parent;
    auto trace_to = [&](const PurePtr& n) {
        std::vector<BetaStep> steps;
        PurePtr cur = n;
        while (!equal(cur, m)) {
            const auto& [p, step] = parent.at(cur);
            steps.push_back(step);
            cur = p;
        }
        std::reverse(steps.begin(), steps.end());
        return BetaTrace{m, std::move(steps)};
    };
    auto try_match = [&](const PurePtr& n) -> std::optional<DerivPtr> {
        switch (goal->kind) {
        case SimpleTerm::Kind::BoundVar: return std::nullopt;
        case SimpleTerm::Kind::FreeVar:
            if (n->kind == PureTerm::Kind::FreeVar && n->name == goal->name)
                return deriv_v(m, ring, trace_to(n));
            return std::nullopt;
        case SimpleTerm::Kind::Lam: {
            if (n->kind != PureTerm::Kind::Lam) return std::nullopt;
            std::set<std::string> avoid = free_vars(n->left);
            collect_free_vars(goal->sub, avoid);
            std::string x = fresh_name(avoid);
            auto sub = prove_strong(open_var(n->left, x), open_simple(goal->sub, x),
                                    ring, ctx);
            if (!sub) return std::nullopt;
            return deriv_lam(m, ring, trace_to(n), x, *sub);
        }
        case SimpleTerm::Kind::App: {
            if (n->kind != PureTerm::Kind::App) return std::nullopt;
            auto fun = prove_strong(n->left, goal->sub, ring, ctx);
            if (!fun) return std::nullopt;
            auto arg = prove_weak(n->right, *goal->arg, ctx);
            if (!arg) return std::nullopt;
            return deriv_app(m, ring, trace_to(n), *fun, *arg);
        }
        }
        return std::nullopt;
    };

    if (auto d = try_match(m)) return d;
    if (ctx.exhausted) return std::nullopt;
    std::set<PurePtr, PureLess> visited{m};
    std::deque<PurePtr> frontier{m};
    while (!frontier.empty()) {
        if (!ctx.spend()) return std::nullopt;
        PurePtr cur = frontier.front();
        frontier.pop_front();
        for (auto& [pos, r] : beta_reducts(cur)) {
            if (visited.count(r)) continue;
            visited.insert(r);
            parent.emplace(r, std::make_pair(cur, BetaStep{pos, r}));
            if (auto d = try_match(r)) return d;
            if (ctx.exhausted) return std::nullopt;
            frontier.push_back(r);
        }
    }
    return std::nullopt;
}

std::optional<DerivPtr> prove_weak(const PurePtr& m, const AlgebraicTerm& goal,
                                   SearchCtx& ctx) {
    std::vector<std::pair<SimplePtr, DerivPtr>> parts;
    for (const auto& [u, c] : goal.entries()) {
        auto d = prove_strong(m, u, goal.ring(), ctx);
        if (!d) return std::nullopt;
        parts.emplace_back(u, *d);
    }
    return support_join(m, goal, parts);
}

} // namespace

std::optional<DerivPtr> prove(const PurePtr& m, const AlgebraicTerm& goal, long fuel) {
    if (!locally_closed(m) || !locally_closed(goal))
        throw UsageError("prove: subject and goal must be locally closed");
    SearchCtx ctx{fuel};
    return prove_weak(m, goal, ctx);
}

std::optional<DerivPtr> prove(const PurePtr& m, const SimplePtr& goal, Semiring ring,
                              long fuel) {
    if (!locally_closed(m) || !locally_closed(goal))
        throw UsageError("prove: subject and goal must be locally closed");
    SearchCtx ctx{fuel};
    return prove_strong(m, goal, ring, ctx);
}

// --------------------------------------------------------------------------
// Support decomposition

std::vector<std::pair<SimplePtr, DerivPtr>> support_split(const DerivPtr& d) {
    auto j = conclusion_of(d);
    if (!j || j->strong)
        throw UsageError("support_split: needs a valid weak derivation");
    std::vector<std::pair<SimplePtr, DerivPtr>> out;
    DerivPtr cur = d;
    while (cur->rule == Derivation::Rule::Plus) {
        auto u = conclusion_of(cur->child1)->rhs_simple;
        bool in_support = !j->rhs_alg->coeff_of(u).is_zero();
        bool seen = std::any_of(out.begin(), out.end(), [&](const auto& e) {
            return equal(e.first, u);
        });
        if (in_support && !seen) out.emplace_back(u, cur->child1);
        cur = cur->child2;
    }
    return out;
}

DerivPtr support_join(const PurePtr& m, const AlgebraicTerm& target,
                      const std::vector<std::pair<SimplePtr, DerivPtr>>& parts) {
    auto find_part = [&](const SimplePtr& u) -> const DerivPtr& {
        for (const auto& [key, d] : parts)
            if (equal(key, u)) return d;
        throw UsageError("support_join: no derivation for a support element");
    };
    DerivPtr acc = deriv_zero(m, target.ring());
    const auto& entries = target.entries();
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
        const DerivPtr& part = find_part(it->first);
        auto pj = conclusion_of(part);
        if (!pj || !pj->strong || !equal(pj->subject, m) ||
            !equal(pj->rhs_simple, it->first))
            throw UsageError("support_join: part does not conclude the right judgement");
        acc = deriv_plus(m, it->second, part, acc);
    }
    return acc;
}

// --------------------------------------------------------------------------
// Admissible rules

DerivPtr admissible_s(const DerivPtr& strong) {
    auto j = conclusion_of(strong);
    if (!j || !j->strong) throw UsageError("admissible_s: needs a strong derivation");
    return deriv_plus(j->subject, Coeff::one(strong->ring), strong,
                      deriv_zero(j->subject, strong->ring));
}

DerivPtr admissible_lam(const BetaTrace& trace, const std::string& binder,
                        const DerivPtr& weak_body) {
    auto j = conclusion_of(weak_body);
    if (!j || j->strong) throw UsageError("admissible_lam: needs a weak body premise");
    const PurePtr& e = trace.end();
    if (e->kind != PureTerm::Kind::Lam)
        throw UsageError("admissible_lam: trace must end at an abstraction");
    if (free_vars(e->left).count(binder))
        throw UsageError("admissible_lam: binder occurs free in the λ-body");
    if (!equal(j->subject, open_var(e->left, binder)))
        throw UsageError("admissible_lam: body subject is not the opened λ-body");
    AlgebraicTerm target = lam_of(close_alg(*j->rhs_alg, binder));
    std::vector<std::pair<SimplePtr, DerivPtr>> parts;
    for (const auto& [u, du] : support_split(weak_body)) {
        parts.emplace_back(slam(close_simple(u, binder)),
                           deriv_lam(trace.start, weak_body->ring, trace, binder, du));
    }
    return support_join(trace.start, target, parts);
}

DerivPtr admissible_app(const BetaTrace& trace, const DerivPtr& weak_fun,
                        const DerivPtr& weak_arg) {
    auto jf = conclusion_of(weak_fun);
    auto ja = conclusion_of(weak_arg);
    if (!jf || jf->strong || !ja || ja->strong)
        throw UsageError("admissible_app: needs weak premises");
    const PurePtr& e = trace.end();
    if (e->kind != PureTerm::Kind::App)
        throw UsageError("admissible_app: trace must end at an application");
    if (!equal(jf->subject, e->left) || !equal(ja->subject, e->right))
        throw UsageError("admissible_app: premise subjects do not match the trace");
    AlgebraicTerm target = app_of(*jf->rhs_alg, *ja->rhs_alg);
    AlgPtr rho = share(*ja->rhs_alg);
    std::vector<std::pair<SimplePtr, DerivPtr>> parts;
    for (const auto& [u, du] : support_split(weak_fun)) {
        parts.emplace_back(sapp(u, rho), deriv_app(trace.start, weak_fun->ring, trace,
                                                   du, weak_arg));
    }
    return support_join(trace.start, target, parts);
}

DerivPtr admissible_plus(const Coeff& a, const DerivPtr& weak1, const DerivPtr& weak2) {
    auto j1 = conclusion_of(weak1);
    auto j2 = conclusion_of(weak2);
    if (!j1 || j1->strong || !j2 || j2->strong)
        throw UsageError("admissible_plus: needs weak premises");
    if (!equal(j1->subject, j2->subject))
        throw UsageError("admissible_plus: premise subjects differ");
    AlgebraicTerm target = j1->rhs_alg->scaled(a).plus(*j2->rhs_alg);
    auto parts = support_split(weak1);
    for (auto& p : support_split(weak2)) {
        bool seen = std::any_of(parts.begin(), parts.end(), [&](const auto& e) {
            return equal(e.first, p.first);
        });
        if (!seen) parts.push_back(p);
    }
    return support_join(j1->subject, target, parts);
}

// --------------------------------------------------------------------------
// Reflexivity

DerivPtr refl_strong(const PurePtr& m, Semiring ring) {
    BetaTrace none{m, {}};
    switch (m->kind) {
    case PureTerm::Kind::FreeVar: return deriv_v(m, ring, none);
    case PureTerm::Kind::BoundVar:
        throw UsageError("refl: term must be locally closed");
    case PureTerm::Kind::Lam: {
        std::string x = fresh_name(free_vars(m->left));
        return deriv_lam(m, ring, none, x, refl_strong(open_var(m->left, x), ring));
    }
    case PureTerm::Kind::App:
        return deriv_app(m, ring, none, refl_strong(m->left, ring),
                         refl(m->right, ring));
    }
    throw UsageError("refl: unreachable");
}

DerivPtr refl(const PurePtr& m, Semiring ring) {
    return admissible_s(refl_strong(m, ring));
}

// --------------------------------------------------------------------------
// Trace extraction

namespace {

BetaTrace extract_strong(const DerivPtr& d) {
    switch (d->rule) {
    case Derivation::Rule::V: return d->trace;
    case Derivation::Rule::Lam: {
        BetaTrace body = extract_strong(d->child1);
        return concat(d->trace, lift_lam(body, d->binder));
    }
    case Derivation::Rule::App: {
        BetaTrace fun = extract_strong(d->child1);
        auto parts = support_split(d->child2);
        if (parts.size() != 1)
            throw UsageError("extract: argument is not a single pure term");
        BetaTrace arg = extract_strong(parts[0].second);
        const PurePtr& e = d->trace.end();
        BetaTrace out = concat(d->trace, lift_app_fun(fun, e->right));
        return concat(out, lift_app_arg(fun.end(), arg));
    }
    default:
        throw UsageError("extract: weak node where a strong derivation was expected");
    }
}

} // namespace

BetaTrace extract(const DerivPtr& d, const PurePtr& n) {
    auto j = conclusion_of(d);
    if (!j) throw UsageError("extract: invalid derivation");
    BetaTrace out{nullptr, {}};
    if (j->strong) {
        auto target = simple_to_pure(j->rhs_simple);
        if (!target || !equal(*target, n))
            throw UsageError("extract: right-hand side is not the target's embedding");
        out = extract_strong(d);
    } else {
        if (*j->rhs_alg != embed(n, d->ring))
            throw UsageError("extract: right-hand side is not the target's embedding");
        auto parts = support_split(d);
        out = extract_strong(parts.at(0).second);
    }
    if (!equal(out.end(), n))
        throw UsageError("extract: trace does not end at the target");
    return out;
}

// --------------------------------------------------------------------------
// Precomposition with a reduction

DerivPtr precompose(const BetaTrace& trace, const DerivPtr& d) {
    if (!d) throw UsageError("precompose: missing derivation");
    if (!equal(trace.end(), d->subject))
        throw UsageError("precompose: trace endpoint does not match the subject");
    switch (d->rule) {
    case Derivation::Rule::V:
        return deriv_v(trace.start, d->ring, concat(trace, d->trace));
    case Derivation::Rule::Lam:
        return deriv_lam(trace.start, d->ring, concat(trace, d->trace), d->binder,
                         d->child1);
    case Derivation::Rule::App:
        return deriv_app(trace.start, d->ring, concat(trace, d->trace), d->child1,
                         d->child2);
    case Derivation::Rule::Zero: return deriv_zero(trace.start, d->ring);
    case Derivation::Rule::Plus:
        return deriv_plus(trace.start, *d->coeff, precompose(trace, d->child1),
                          precompose(trace, d->child2));
    }
    throw UsageError("precompose: unreachable");
}

// --------------------------------------------------------------------------
// Renaming of free variables

DerivPtr rename_free(const DerivPtr& d, const std::string& from, const std::string& to) {
    PurePtr repl = pvar(to);
    PurePtr subject = subst_free(d->subject, from, repl);
    switch (d->rule) {
    case Derivation::Rule::V:
        return deriv_v(subject, d->ring, subst_trace(d->trace, from, repl));
    case Derivation::Rule::Lam: {
        // a binder equal to the renamed variable shadows it below this node
        DerivPtr body = d->binder == from ? d->child1 : rename_free(d->child1, from, to);
        return deriv_lam(subject, d->ring, subst_trace(d->trace, from, repl),
                         d->binder, body);
    }
    case Derivation::Rule::App:
        return deriv_app(subject, d->ring, subst_trace(d->trace, from, repl),
                         rename_free(d->child1, from, to),
                         rename_free(d->child2, from, to));
    case Derivation::Rule::Zero: return deriv_zero(subject, d->ring);
    case Derivation::Rule::Plus:
        return deriv_plus(subject, *d->coeff, rename_free(d->child1, from, to),
                          rename_free(d->child2, from, to));
    }
    throw UsageError("rename_free: unreachable");
}

// --------------------------------------------------------------------------
// Substitution transformer

namespace {

void collect_names(const DerivPtr& d, std::set<std::string>& out) {
    if (!d) return;
    collect_free_vars(d->subject, out);
    if (!d->binder.empty()) out.insert(d->binder);
    collect_names(d->child1, out);
    collect_names(d->child2, out);
}

} // namespace

DerivPtr subst_derivation(const DerivPtr& dm, const std::string& x, const DerivPtr& dp) {
    auto jp = conclusion_of(dp);
    if (!jp || jp->strong)
        throw UsageError("subst_derivation: substituend must be a weak derivation");
    const PurePtr& p = dp->subject;
    const AlgebraicTerm& rho = *jp->rhs_alg;
    auto jm = conclusion_of(dm);
    if (!jm) throw UsageError("subst_derivation: invalid derivation");

    switch (dm->rule) {
    case Derivation::Rule::V: {
        BetaTrace tr = subst_trace(dm->trace, x, p);
        if (dm->trace.end()->name == x) return precompose(tr, dp);
        return admissible_s(deriv_v(tr.start, dm->ring, tr));
    }
    case Derivation::Rule::Lam: {
        DerivPtr node = dm;
        std::string y = dm->binder;
        std::set<std::string> clash = free_vars(p);
        collect_free_vars(rho, clash);
        clash.insert(x);
        if (clash.count(y)) {
            std::set<std::string> avoid = clash;
            collect_names(dm, avoid);
            collect_names(dp, avoid);
            std::string fresh = fresh_name(avoid);
            node = deriv_lam(dm->subject, dm->ring, dm->trace, fresh,
                             rename_free(dm->child1, y, fresh));
            y = fresh;
        }
        BetaTrace tr = subst_trace(node->trace, x, p);
        DerivPtr body = subst_derivation(node->child1, x, dp);
        return admissible_lam(tr, y, body);
    }
    case Derivation::Rule::App: {
        BetaTrace tr = subst_trace(dm->trace, x, p);
        DerivPtr fun = subst_derivation(dm->child1, x, dp);
        DerivPtr arg = subst_derivation(dm->child2, x, dp);
        return admissible_app(tr, fun, arg);
    }
    case Derivation::Rule::Zero:
        return deriv_zero(subst_free(dm->subject, x, p), dm->ring);
    case Derivation::Rule::Plus:
        return admissible_plus(*dm->coeff, subst_derivation(dm->child1, x, dp),
                               subst_derivation(dm->child2, x, dp));
    }
    throw UsageError("subst_derivation: unreachable");
}

// --------------------------------------------------------------------------
// Step transformer

DerivPtr step_derivation_strong(const DerivPtr& dm, const SimpleStep& step) {
    if (!is_positive(dm->ring))
        throw UsageError("step_derivation: needs a positive semiring");
    auto j = conclusion_of(dm);
    if (!j || !j->strong)
        throw UsageError("step_derivation: needs a strong derivation here");
    if (!apply_step(j->rhs_simple, step, dm->ring))
        throw UsageError("step_derivation: step does not fit the conclusion");

    switch (step.kind) {
    case SimpleStep::Kind::HeadBeta: {
        // conclusion (λx.τ)ρ forces an application node over an abstraction node
        if (dm->rule != Derivation::Rule::App ||
            dm->child1->rule != Derivation::Rule::Lam)
            throw UsageError("step_derivation: head redex without the expected shape");
        const DerivPtr& dfun = dm->child1;
        const PurePtr& np = dm->trace.end();        // (N)P
        const PurePtr& lam_end = dfun->trace.end(); // λx.N'
        BetaTrace t = concat(dm->trace, lift_app_fun(dfun->trace, np->right));
        PurePtr contracted = instantiate(lam_end->left, np->right);
        t.steps.push_back({Pos{}, contracted});
        DerivPtr dsub = subst_derivation(dfun->child1, dfun->binder, dm->child2);
        return precompose(t, dsub);
    }
    case SimpleStep::Kind::InLamBody: {
        if (dm->rule != Derivation::Rule::Lam)
            throw UsageError("step_derivation: body step on a non-abstraction node");
        DerivPtr body = step_derivation_strong(
            dm->child1, *open_step(step.inner, dm->binder));
        return admissible_lam(dm->trace, dm->binder, body);
    }
    case SimpleStep::Kind::InAppFun: {
        if (dm->rule != Derivation::Rule::App)
            throw UsageError("step_derivation: function step on a non-application node");
        DerivPtr fun = step_derivation_strong(dm->child1, *step.inner);
        return admissible_app(dm->trace, fun, dm->child2);
    }
    case SimpleStep::Kind::InAppArg: {
        if (dm->rule != Derivation::Rule::App)
            throw UsageError("step_derivation: argument step on a non-application node");
        DerivPtr arg = step_derivation(dm->child2, *step.inner_alg);
        return admissible_app(dm->trace, admissible_s(dm->child1), arg);
    }
    }
    throw UsageError("step_derivation: unreachable");
}

DerivPtr step_derivation(const DerivPtr& dm, const AlgStep& step) {
    if (!is_positive(dm->ring))
        throw UsageError("step_derivation: needs a positive semiring");
    auto j = conclusion_of(dm);
    if (!j || j->strong)
        throw UsageError("step_derivation: needs a weak derivation");
    if (!apply_step(*j->rhs_alg, step))
        throw UsageError("step_derivation: step does not apply to the conclusion");
    auto parts = support_split(dm);
    // by positivity the selected element has nonzero coefficient a + b, so it
    // is in the support and the split provides a strong derivation for it
    const DerivPtr* dtau = nullptr;
    for (const auto& [u, du] : parts)
        if (equal(u, step.selected)) dtau = &du;
    if (!dtau)
        throw UsageError("step_derivation: selected element is not in the support");
    DerivPtr reduced = step_derivation_strong(*dtau, *step.inner);
    AlgebraicTerm residual = j->rhs_alg->with_coeff(step.selected, step.residual);
    DerivPtr drho = support_join(dm->subject, residual, parts);
    return admissible_plus(step.split, reduced, drho);
}

} // namespace alambda
