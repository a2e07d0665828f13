#include <deque>
#include <map>
#include <set>

#include "alambda/reduction.hpp"

namespace alambda {

namespace {

struct PureLess {
    bool operator()(const PurePtr& a, const PurePtr& b) const {
        return compare(a, b) < 0;
    }
};

struct AlgLess {
    bool operator()(const AlgebraicTerm& a, const AlgebraicTerm& b) const {
        return compare(a, b) < 0;
    }
};

PurePtr rebuild_at(const PurePtr& t, const Pos& pos, std::size_t i, const PurePtr& sub);

void collect_beta_reducts(const PurePtr& root, const PurePtr& t, Pos& pos,
                          std::vector<std::pair<Pos, PurePtr>>& out) {
    if (t->kind == PureTerm::Kind::App && t->left->kind == PureTerm::Kind::Lam)
        out.emplace_back(pos, rebuild_at(root, pos, 0,
                                         instantiate(t->left->left, t->right)));
    switch (t->kind) {
    case PureTerm::Kind::Lam:
        pos.push_back(0);
        collect_beta_reducts(root, t->left, pos, out);
        pos.pop_back();
        break;
    case PureTerm::Kind::App:
        pos.push_back(0);
        collect_beta_reducts(root, t->left, pos, out);
        pos.back() = 1;
        collect_beta_reducts(root, t->right, pos, out);
        pos.pop_back();
        break;
    default: break;
    }
}

// Replace the subterm at `pos`, rebuilding the spine on the way out.
PurePtr rebuild_at(const PurePtr& t, const Pos& pos, std::size_t i, const PurePtr& sub) {
    if (i == pos.size()) return sub;
    if (t->kind == PureTerm::Kind::Lam && pos[i] == 0)
        return plam(rebuild_at(t->left, pos, i + 1, sub));
    if (t->kind == PureTerm::Kind::App && pos[i] == 0)
        return papp(rebuild_at(t->left, pos, i + 1, sub), t->right);
    if (t->kind == PureTerm::Kind::App && pos[i] == 1)
        return papp(t->left, rebuild_at(t->right, pos, i + 1, sub));
    return nullptr;
}

const PurePtr* navigate(const PurePtr& t, const Pos& pos) {
    const PurePtr* cur = &t;
    for (int step : pos) {
        const PurePtr& c = *cur;
        if (c->kind == PureTerm::Kind::Lam && step == 0)
            cur = &c->left;
        else if (c->kind == PureTerm::Kind::App && step == 0)
            cur = &c->left;
        else if (c->kind == PureTerm::Kind::App && step == 1)
            cur = &c->right;
        else
            return nullptr;
    }
    return cur;
}

} // namespace

std::vector<std::pair<Pos, PurePtr>> beta_reducts(const PurePtr& m) {
    std::vector<std::pair<Pos, PurePtr>> out;
    Pos pos;
    collect_beta_reducts(m, m, pos, out);
    return out;
}

std::optional<PurePtr> contract_at(const PurePtr& m, const Pos& pos) {
    const PurePtr* sub = navigate(m, pos);
    if (!sub) return std::nullopt;
    const PurePtr& t = *sub;
    if (t->kind != PureTerm::Kind::App || t->left->kind != PureTerm::Kind::Lam)
        return std::nullopt;
    PurePtr contracted = instantiate(t->left->left, t->right);
    PurePtr rebuilt = rebuild_at(m, pos, 0, contracted);
    return rebuilt ? std::optional<PurePtr>(rebuilt) : std::nullopt;
}

bool validate(const BetaTrace& t) {
    PurePtr cur = t.start;
    if (!cur || !locally_closed(cur)) return false;
    for (const auto& step : t.steps) {
        auto next = contract_at(cur, step.pos);
        if (!next || !equal(*next, step.result)) return false;
        cur = step.result;
    }
    return true;
}

std::optional<BetaTrace> beta_reaches(const PurePtr& m, const PurePtr& n, long fuel) {
    if (equal(m, n)) return BetaTrace{m, {}};
    std::map<PurePtr, std::pair<PurePtr, BetaStep>, PureLess> parent;
    std::set<PurePtr, PureLess> visited{m};
    std::deque<PurePtr> frontier{m};
    auto reconstruct = [&](PurePtr endpoint) {
        std::vector<BetaStep> steps;
        PurePtr cur = endpoint;
        while (!equal(cur, m)) {
            auto& [p, step] = parent.at(cur);
            steps.push_back(step);
            cur = p;
        }
        std::reverse(steps.begin(), steps.end());
        return BetaTrace{m, std::move(steps)};
    };
    while (!frontier.empty() && fuel > 0) {
        PurePtr cur = frontier.front();
        frontier.pop_front();
        --fuel;
        for (auto& [pos, r] : beta_reducts(cur)) {
            if (visited.count(r)) continue;
            visited.insert(r);
            parent.emplace(r, std::make_pair(cur, BetaStep{pos, r}));
            if (equal(r, n)) return reconstruct(r);
            frontier.push_back(r);
        }
    }
    return std::nullopt;
}

SimpleStepPtr step_head_beta() {
    auto s = std::make_shared<SimpleStep>();
    s->kind = SimpleStep::Kind::HeadBeta;
    return s;
}

SimpleStepPtr step_in_lam(SimpleStepPtr inner) {
    auto s = std::make_shared<SimpleStep>();
    s->kind = SimpleStep::Kind::InLamBody;
    s->inner = std::move(inner);
    return s;
}

SimpleStepPtr step_in_fun(SimpleStepPtr inner) {
    auto s = std::make_shared<SimpleStep>();
    s->kind = SimpleStep::Kind::InAppFun;
    s->inner = std::move(inner);
    return s;
}

SimpleStepPtr step_in_arg(AlgStepPtr inner) {
    auto s = std::make_shared<SimpleStep>();
    s->kind = SimpleStep::Kind::InAppArg;
    s->inner_alg = std::move(inner);
    return s;
}

namespace {

SimpleStepPtr open_step_at(const SimpleStepPtr& s, int depth, const std::string& x);

AlgStepPtr open_alg_step_at(const AlgStepPtr& a, int depth, const std::string& x) {
    auto out = std::make_shared<AlgStep>(*a);
    out->selected = open_simple(a->selected, x, depth);
    out->inner = open_step_at(a->inner, depth, x);
    return out;
}

SimpleStepPtr open_step_at(const SimpleStepPtr& s, int depth, const std::string& x) {
    switch (s->kind) {
    case SimpleStep::Kind::HeadBeta: return s;
    case SimpleStep::Kind::InLamBody:
        return step_in_lam(open_step_at(s->inner, depth + 1, x));
    case SimpleStep::Kind::InAppFun:
        return step_in_fun(open_step_at(s->inner, depth, x));
    case SimpleStep::Kind::InAppArg:
        return step_in_arg(open_alg_step_at(s->inner_alg, depth, x));
    }
    return s;
}

} // namespace

SimpleStepPtr open_step(const SimpleStepPtr& s, const std::string& x) {
    return open_step_at(s, 0, x);
}

std::optional<AlgebraicTerm> apply_step(const SimplePtr& t, const SimpleStep& s,
                                        Semiring ring) {
    switch (s.kind) {
    case SimpleStep::Kind::HeadBeta:
        if (t->kind != SimpleTerm::Kind::App || t->sub->kind != SimpleTerm::Kind::Lam)
            return std::nullopt;
        return instantiate(t->sub->sub, *t->arg);
    case SimpleStep::Kind::InLamBody: {
        if (t->kind != SimpleTerm::Kind::Lam || !s.inner) return std::nullopt;
        auto r = apply_step(t->sub, *s.inner, ring);
        if (!r) return std::nullopt;
        return lam_of(*r);
    }
    case SimpleStep::Kind::InAppFun: {
        if (t->kind != SimpleTerm::Kind::App || !s.inner) return std::nullopt;
        auto r = apply_step(t->sub, *s.inner, ring);
        if (!r) return std::nullopt;
        return app_of(*r, *t->arg);
    }
    case SimpleStep::Kind::InAppArg: {
        if (t->kind != SimpleTerm::Kind::App || !s.inner_alg) return std::nullopt;
        auto r = apply_step(*t->arg, *s.inner_alg);
        if (!r) return std::nullopt;
        return AlgebraicTerm::singleton(sapp(t->sub, share(*r)), Coeff::one(ring));
    }
    }
    return std::nullopt;
}

std::optional<AlgebraicTerm> apply_step(const AlgebraicTerm& s, const AlgStep& step) {
    if (step.split.ring() != s.ring() || step.residual.ring() != s.ring())
        return std::nullopt;
    if (step.split.is_zero() || !step.inner) return std::nullopt;
    Coeff have = s.coeff_of(step.selected);
    if (step.split.add(step.residual) != have) return std::nullopt;
    auto reduct = apply_step(step.selected, *step.inner, s.ring());
    if (!reduct) return std::nullopt;
    return s.with_coeff(step.selected, step.residual).plus(reduct->scaled(step.split));
}

std::optional<SplitPolicy::Name> split_policy_from_name(std::string_view s) {
    if (s == "full") return SplitPolicy::Name::Full;
    if (s == "unit") return SplitPolicy::Name::Unit;
    if (s == "half") return SplitPolicy::Name::Half;
    return std::nullopt;
}

std::string_view split_policy_name(SplitPolicy::Name n) {
    switch (n) {
    case SplitPolicy::Name::Full: return "full";
    case SplitPolicy::Name::Unit: return "unit";
    case SplitPolicy::Name::Half: return "half";
    }
    return "?";
}

bool split_policy_valid(SplitPolicy::Name n, Semiring ring) {
    switch (n) {
    case SplitPolicy::Name::Full: return true;
    case SplitPolicy::Name::Unit: return ring == Semiring::Nat;
    case SplitPolicy::Name::Half: return ring == Semiring::NonnegRat;
    }
    return false;
}

std::vector<std::pair<Coeff, Coeff>> enumerate_splits(const Coeff& c,
                                                      const SplitPolicy& policy) {
    std::vector<std::pair<Coeff, Coeff>> out;
    Coeff zero = Coeff::zero(c.ring());
    out.emplace_back(c, zero); // full split first
    if (policy.name == SplitPolicy::Name::Unit && c.ring() == Semiring::Nat &&
        c.is_integral() &&
        c.cmp(Coeff::from_long(c.ring(), static_cast<long>(policy.unit_cap))) <= 0) {
        long n = c.to_long(); // bounded by the cap, so this is exact
        for (long a = 1; a < n; ++a)
            out.emplace_back(Coeff::from_long(c.ring(), a),
                             Coeff::from_long(c.ring(), n - a));
    }
    if (policy.name == SplitPolicy::Name::Half && c.ring() == Semiring::NonnegRat &&
        !c.is_zero()) {
        Coeff h = c.half();
        out.emplace_back(h, h);
    }
    return out;
}

std::vector<std::pair<SimpleStepPtr, AlgebraicTerm>>
simple_reducts(const SimplePtr& t, Semiring ring, const SplitPolicy& policy) {
    std::vector<std::pair<SimpleStepPtr, AlgebraicTerm>> out;
    switch (t->kind) {
    case SimpleTerm::Kind::FreeVar:
    case SimpleTerm::Kind::BoundVar: break;
    case SimpleTerm::Kind::Lam:
        for (auto& [s, r] : simple_reducts(t->sub, ring, policy))
            out.emplace_back(step_in_lam(s), lam_of(r));
        break;
    case SimpleTerm::Kind::App:
        if (t->sub->kind == SimpleTerm::Kind::Lam)
            out.emplace_back(step_head_beta(), instantiate(t->sub->sub, *t->arg));
        for (auto& [s, r] : simple_reducts(t->sub, ring, policy))
            out.emplace_back(step_in_fun(s), app_of(r, *t->arg));
        for (auto& [as, r] : alg_reducts(*t->arg, policy))
            out.emplace_back(step_in_arg(std::make_shared<AlgStep>(as)),
                             AlgebraicTerm::singleton(sapp(t->sub, share(r)),
                                                      Coeff::one(ring)));
        break;
    }
    return out;
}

std::vector<std::pair<AlgStep, AlgebraicTerm>>
alg_reducts(const AlgebraicTerm& s, const SplitPolicy& policy) {
    std::vector<std::pair<AlgStep, AlgebraicTerm>> out;
    for (const auto& [u, c] : s.entries()) {
        auto reducts = simple_reducts(u, s.ring(), policy);
        if (reducts.empty()) continue;
        auto splits = enumerate_splits(c, policy);
        for (auto& [inner, reduct] : reducts) {
            for (auto& [a, b] : splits) {
                AlgStep step{u, a, b, inner};
                out.emplace_back(step, s.with_coeff(u, b).plus(reduct.scaled(a)));
            }
        }
    }
    return out;
}

bool validate(const AlgTrace& t) {
    AlgebraicTerm cur = t.start;
    for (const auto& s : t.steps) {
        auto reduct = apply_step(s.step.selected, *s.step.inner, cur.ring());
        if (!reduct || *reduct != s.reduct) return false;
        auto next = apply_step(cur, s.step);
        if (!next || *next != s.result) return false;
        cur = s.result;
    }
    return true;
}

PurePtr parallel_reduce(const PurePtr& m) {
    switch (m->kind) {
    case PureTerm::Kind::FreeVar:
    case PureTerm::Kind::BoundVar: return m;
    case PureTerm::Kind::Lam: return plam(parallel_reduce(m->left));
    case PureTerm::Kind::App:
        if (m->left->kind == PureTerm::Kind::Lam)
            return instantiate(parallel_reduce(m->left->left), parallel_reduce(m->right));
        return papp(parallel_reduce(m->left), parallel_reduce(m->right));
    }
    return m;
}

AlgebraicTerm parallel_reduce_simple(const SimplePtr& t, Semiring ring) {
    switch (t->kind) {
    case SimpleTerm::Kind::FreeVar:
    case SimpleTerm::Kind::BoundVar:
        return AlgebraicTerm::singleton(t, Coeff::one(ring));
    case SimpleTerm::Kind::Lam:
        return lam_of(parallel_reduce_simple(t->sub, ring));
    case SimpleTerm::Kind::App:
        if (t->sub->kind == SimpleTerm::Kind::Lam)
            return instantiate(parallel_reduce_simple(t->sub->sub, ring),
                               parallel_reduce(*t->arg));
        return app_of(parallel_reduce_simple(t->sub, ring), parallel_reduce(*t->arg));
    }
    return AlgebraicTerm(ring);
}

AlgebraicTerm parallel_reduce(const AlgebraicTerm& s) {
    AlgebraicTerm out(s.ring());
    for (const auto& [u, c] : s.entries())
        out = out.plus(parallel_reduce_simple(u, s.ring()).scaled(c));
    return out;
}

namespace {

bool has_redex(const AlgebraicTerm& s);

bool has_redex(const SimplePtr& t) {
    switch (t->kind) {
    case SimpleTerm::Kind::FreeVar:
    case SimpleTerm::Kind::BoundVar: return false;
    case SimpleTerm::Kind::Lam: return has_redex(t->sub);
    case SimpleTerm::Kind::App:
        return t->sub->kind == SimpleTerm::Kind::Lam || has_redex(t->sub) ||
               has_redex(*t->arg);
    }
    return false;
}

bool has_redex(const AlgebraicTerm& s) {
    for (const auto& [u, c] : s.entries())
        if (has_redex(u)) return true;
    return false;
}

} // namespace

bool is_normal(const AlgebraicTerm& s) {
    if (!is_positive(s.ring()))
        throw UsageError("is_normal: needs a positive semiring; over " +
                         std::string(semiring_name(s.ring())) +
                         " redex-freeness does not coincide with ~>-normality");
    return !has_redex(s);
}

namespace {

struct AlgSearchSide {
    std::map<AlgebraicTerm, std::pair<AlgebraicTerm, AlgStep>, AlgLess> parent;
    std::set<AlgebraicTerm, AlgLess> visited;
    std::deque<AlgebraicTerm> frontier;

    explicit AlgSearchSide(const AlgebraicTerm& start) {
        visited.insert(start);
        frontier.push_back(start);
    }

    AlgTrace trace_to(const AlgebraicTerm& start, const AlgebraicTerm& endpoint) const {
        std::vector<AlgTraceStep> steps;
        AlgebraicTerm cur = endpoint;
        while (cur != start) {
            const auto& [p, step] = parent.at(cur);
            auto reduct = apply_step(step.selected, *step.inner, cur.ring());
            steps.push_back(AlgTraceStep{step, *reduct, cur});
            cur = p;
        }
        std::reverse(steps.begin(), steps.end());
        return AlgTrace{start, std::move(steps)};
    }
};

} // namespace

std::optional<AlgTrace> alg_reaches(const AlgebraicTerm& from, const AlgebraicTerm& to,
                                    long fuel, const SplitPolicy& policy) {
    if (from.ring() != to.ring()) throw UsageError("alg_reaches: mixed semirings");
    if (from == to) return AlgTrace{from, {}};
    AlgSearchSide side(from);
    while (!side.frontier.empty() && fuel > 0) {
        AlgebraicTerm cur = side.frontier.front();
        side.frontier.pop_front();
        --fuel;
        for (auto& [step, r] : alg_reducts(cur, policy)) {
            if (side.visited.count(r)) continue;
            side.visited.insert(r);
            side.parent.emplace(r, std::make_pair(cur, step));
            if (r == to) return side.trace_to(from, r);
            side.frontier.push_back(r);
        }
    }
    return std::nullopt;
}

std::optional<JoinResult> joinable(const AlgebraicTerm& s, const AlgebraicTerm& t,
                                   long fuel, const SplitPolicy& policy) {
    if (s.ring() != t.ring()) throw UsageError("joinable: mixed semirings");
    if (s == t) return JoinResult{s, AlgTrace{s, {}}, AlgTrace{t, {}}};
    AlgSearchSide left(s), right(t);
    while (fuel > 0 && (!left.frontier.empty() || !right.frontier.empty())) {
        bool expand_left;
        if (left.frontier.empty())
            expand_left = false;
        else if (right.frontier.empty())
            expand_left = true;
        else
            expand_left = left.frontier.size() <= right.frontier.size();
        AlgSearchSide& own = expand_left ? left : right;
        AlgSearchSide& other = expand_left ? right : left;
        AlgebraicTerm cur = own.frontier.front();
        own.frontier.pop_front();
        --fuel;
        for (auto& [step, r] : alg_reducts(cur, policy)) {
            if (!own.visited.count(r)) {
                own.visited.insert(r);
                own.parent.emplace(r, std::make_pair(cur, step));
                own.frontier.push_back(r);
            }
            if (other.visited.count(r)) {
                return JoinResult{r, left.trace_to(s, r), right.trace_to(t, r)};
            }
        }
    }
    return std::nullopt;
}

} // namespace alambda
