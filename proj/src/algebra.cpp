#include <algorithm>

#include "alambda/algebra.hpp"

namespace alambda {

SimplePtr svar(std::string name) {
    auto t = std::make_shared<SimpleTerm>();
    t->kind = SimpleTerm::Kind::FreeVar;
    t->name = std::move(name);
    return t;
}

SimplePtr sbound(int index) {
    auto t = std::make_shared<SimpleTerm>();
    t->kind = SimpleTerm::Kind::BoundVar;
    t->index = index;
    return t;
}

SimplePtr slam(SimplePtr body) {
    auto t = std::make_shared<SimpleTerm>();
    t->kind = SimpleTerm::Kind::Lam;
    t->sub = std::move(body);
    return t;
}

SimplePtr sapp(SimplePtr fun, AlgPtr arg) {
    auto t = std::make_shared<SimpleTerm>();
    t->kind = SimpleTerm::Kind::App;
    t->sub = std::move(fun);
    t->arg = std::move(arg);
    return t;
}

static int kind_rank(SimpleTerm::Kind k) {
    switch (k) {
    case SimpleTerm::Kind::BoundVar: return 0;
    case SimpleTerm::Kind::FreeVar: return 1;
    case SimpleTerm::Kind::Lam: return 2;
    case SimpleTerm::Kind::App: return 3;
    }
    return 4;
}

std::strong_ordering compare(const SimplePtr& a, const SimplePtr& b) {
    if (a.get() == b.get()) return std::strong_ordering::equal;
    if (auto c = kind_rank(a->kind) <=> kind_rank(b->kind); c != 0) return c;
    switch (a->kind) {
    case SimpleTerm::Kind::BoundVar: return a->index <=> b->index;
    case SimpleTerm::Kind::FreeVar: return a->name <=> b->name;
    case SimpleTerm::Kind::Lam: return compare(a->sub, b->sub);
    case SimpleTerm::Kind::App:
        if (auto c = compare(a->sub, b->sub); c != 0) return c;
        return compare(*a->arg, *b->arg);
    }
    return std::strong_ordering::equal;
}

bool equal(const SimplePtr& a, const SimplePtr& b) {
    return compare(a, b) == std::strong_ordering::equal;
}

std::strong_ordering compare(const AlgebraicTerm& a, const AlgebraicTerm& b) {
    if (a.ring() != b.ring())
        return static_cast<int>(a.ring()) <=> static_cast<int>(b.ring());
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    for (std::size_t i = 0; i < ea.size() && i < eb.size(); ++i) {
        if (auto c = compare(ea[i].first, eb[i].first); c != 0) return c;
        if (int c = ea[i].second.cmp(eb[i].second); c != 0) return c <=> 0;
    }
    return ea.size() <=> eb.size();
}

AlgebraicTerm AlgebraicTerm::singleton(SimplePtr t, Coeff c) {
    AlgebraicTerm s(c.ring());
    if (!c.is_zero()) s.entries_.emplace_back(std::move(t), std::move(c));
    return s;
}

AlgebraicTerm AlgebraicTerm::build(Semiring ring, std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return compare(a.first, b.first) < 0;
    });
    AlgebraicTerm out(ring);
    for (auto& [t, c] : entries) {
        if (c.ring() != ring)
            throw UsageError("algebraic term: coefficient from a different semiring");
        if (!out.entries_.empty() && equal(out.entries_.back().first, t)) {
            out.entries_.back().second = out.entries_.back().second.add(c);
        } else {
            out.entries_.emplace_back(std::move(t), std::move(c));
        }
    }
    std::erase_if(out.entries_, [](const Entry& e) { return e.second.is_zero(); });
    return out;
}

Coeff AlgebraicTerm::coeff_of(const SimplePtr& u) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), u,
                               [](const Entry& e, const SimplePtr& t) {
                                   return compare(e.first, t) < 0;
                               });
    if (it != entries_.end() && equal(it->first, u)) return it->second;
    return Coeff::zero(ring_);
}

AlgebraicTerm AlgebraicTerm::plus(const AlgebraicTerm& o) const {
    if (ring_ != o.ring_) throw UsageError("plus: mixed semirings");
    AlgebraicTerm out(ring_);
    std::size_t i = 0, j = 0;
    while (i < entries_.size() && j < o.entries_.size()) {
        auto c = compare(entries_[i].first, o.entries_[j].first);
        if (c < 0) {
            out.entries_.push_back(entries_[i++]);
        } else if (c > 0) {
            out.entries_.push_back(o.entries_[j++]);
        } else {
            Coeff sum = entries_[i].second.add(o.entries_[j].second);
            if (!sum.is_zero()) out.entries_.emplace_back(entries_[i].first, std::move(sum));
            ++i;
            ++j;
        }
    }
    for (; i < entries_.size(); ++i) out.entries_.push_back(entries_[i]);
    for (; j < o.entries_.size(); ++j) out.entries_.push_back(o.entries_[j]);
    return out;
}

AlgebraicTerm AlgebraicTerm::scaled(const Coeff& a) const {
    if (a.ring() != ring_) throw UsageError("scaled: mixed semirings");
    AlgebraicTerm out(ring_);
    if (a.is_zero()) return out;
    for (const auto& [t, c] : entries_) {
        Coeff p = a.mul(c);
        if (!p.is_zero()) out.entries_.emplace_back(t, std::move(p));
    }
    return out;
}

AlgebraicTerm AlgebraicTerm::with_coeff(const SimplePtr& u, const Coeff& c) const {
    if (c.ring() != ring_) throw UsageError("with_coeff: mixed semirings");
    AlgebraicTerm out(ring_);
    out.entries_ = entries_;
    auto it = std::lower_bound(out.entries_.begin(), out.entries_.end(), u,
                               [](const Entry& e, const SimplePtr& t) {
                                   return compare(e.first, t) < 0;
                               });
    if (it != out.entries_.end() && equal(it->first, u)) {
        if (c.is_zero())
            out.entries_.erase(it);
        else
            it->second = c;
    } else if (!c.is_zero()) {
        out.entries_.insert(it, {u, c});
    }
    return out;
}

bool AlgebraicTerm::operator==(const AlgebraicTerm& o) const {
    return compare(*this, o) == std::strong_ordering::equal;
}

AlgebraicTerm lam_of(const AlgebraicTerm& body) {
    std::vector<AlgebraicTerm::Entry> entries;
    entries.reserve(body.entries().size());
    for (const auto& [t, c] : body.entries()) entries.emplace_back(slam(t), c);
    return AlgebraicTerm::build(body.ring(), std::move(entries));
}

AlgebraicTerm app_of(const AlgebraicTerm& fun, const AlgebraicTerm& arg) {
    if (fun.ring() != arg.ring()) throw UsageError("app_of: mixed semirings");
    AlgPtr shared_arg = share(arg);
    std::vector<AlgebraicTerm::Entry> entries;
    entries.reserve(fun.entries().size());
    for (const auto& [t, c] : fun.entries()) entries.emplace_back(sapp(t, shared_arg), c);
    return AlgebraicTerm::build(fun.ring(), std::move(entries));
}

AlgebraicTerm canonicalize(const RawPtr& t, Semiring ring) {
    switch (t->kind) {
    case RawTerm::Kind::FreeVar:
        return AlgebraicTerm::singleton(svar(t->name), Coeff::one(ring));
    case RawTerm::Kind::BoundVar:
        return AlgebraicTerm::singleton(sbound(t->index), Coeff::one(ring));
    case RawTerm::Kind::Lam: return lam_of(canonicalize(t->left, ring));
    case RawTerm::Kind::App:
        return app_of(canonicalize(t->left, ring), canonicalize(t->right, ring));
    case RawTerm::Kind::Zero: return AlgebraicTerm(ring);
    case RawTerm::Kind::Sum:
        return canonicalize(t->left, ring).plus(canonicalize(t->right, ring));
    case RawTerm::Kind::Scale: {
        if (t->coeff->ring() != ring)
            throw UsageError("canonicalize: coefficient from a different semiring");
        return canonicalize(t->left, ring).scaled(*t->coeff);
    }
    }
    return AlgebraicTerm(ring);
}

RawPtr readback(const SimplePtr& u) {
    switch (u->kind) {
    case SimpleTerm::Kind::FreeVar: return rvar(u->name);
    case SimpleTerm::Kind::BoundVar: return rbound(u->index);
    case SimpleTerm::Kind::Lam: return rlam(readback(u->sub));
    case SimpleTerm::Kind::App: return rapp(readback(u->sub), readback(*u->arg));
    }
    return rzero();
}

RawPtr readback(const AlgebraicTerm& s) {
    if (s.is_zero()) return rzero();
    RawPtr out;
    for (auto it = s.entries().rbegin(); it != s.entries().rend(); ++it) {
        RawPtr piece = readback(it->first);
        if (!it->second.is_one()) piece = rscale(it->second, std::move(piece));
        out = out ? rsum(std::move(piece), std::move(out)) : std::move(piece);
    }
    return out;
}

std::string print(const AlgebraicTerm& s) { return print(readback(s)); }
std::string print(const SimplePtr& u) { return print(readback(u)); }

SimplePtr embed_simple(const PurePtr& m, Semiring ring) {
    switch (m->kind) {
    case PureTerm::Kind::FreeVar: return svar(m->name);
    case PureTerm::Kind::BoundVar: return sbound(m->index);
    case PureTerm::Kind::Lam: return slam(embed_simple(m->left, ring));
    case PureTerm::Kind::App: {
        auto fun = embed_simple(m->left, ring);
        auto argsimple = embed_simple(m->right, ring);
        return sapp(std::move(fun),
                    share(AlgebraicTerm::singleton(std::move(argsimple),
                                                   Coeff::one(ring))));
    }
    }
    return svar("?");
}

std::optional<PurePtr> simple_to_pure(const SimplePtr& u) {
    switch (u->kind) {
    case SimpleTerm::Kind::FreeVar: return pvar(u->name);
    case SimpleTerm::Kind::BoundVar: return pbound(u->index);
    case SimpleTerm::Kind::Lam: {
        auto body = simple_to_pure(u->sub);
        if (!body) return std::nullopt;
        return plam(*body);
    }
    case SimpleTerm::Kind::App: {
        auto fun = simple_to_pure(u->sub);
        if (!fun) return std::nullopt;
        if (u->arg->support_size() != 1 || !u->arg->entries()[0].second.is_one())
            return std::nullopt;
        auto arg = simple_to_pure(u->arg->entries()[0].first);
        if (!arg) return std::nullopt;
        return papp(*fun, *arg);
    }
    }
    return std::nullopt;
}

std::optional<PurePtr> as_pure(const AlgebraicTerm& s) {
    if (s.support_size() != 1 || !s.entries()[0].second.is_one()) return std::nullopt;
    return simple_to_pure(s.entries()[0].first);
}

AlgebraicTerm embed(const PurePtr& m, Semiring ring) {
    return AlgebraicTerm::singleton(embed_simple(m, ring), Coeff::one(ring));
}

void collect_free_vars(const SimplePtr& u, std::set<std::string>& out) {
    switch (u->kind) {
    case SimpleTerm::Kind::FreeVar: out.insert(u->name); break;
    case SimpleTerm::Kind::BoundVar: break;
    case SimpleTerm::Kind::Lam: collect_free_vars(u->sub, out); break;
    case SimpleTerm::Kind::App:
        collect_free_vars(u->sub, out);
        collect_free_vars(*u->arg, out);
        break;
    }
}

void collect_free_vars(const AlgebraicTerm& s, std::set<std::string>& out) {
    for (const auto& [t, c] : s.entries()) collect_free_vars(t, out);
}

static bool locally_closed_at(const SimplePtr& u, int depth) {
    switch (u->kind) {
    case SimpleTerm::Kind::FreeVar: return true;
    case SimpleTerm::Kind::BoundVar: return u->index < depth;
    case SimpleTerm::Kind::Lam: return locally_closed_at(u->sub, depth + 1);
    case SimpleTerm::Kind::App: {
        if (!locally_closed_at(u->sub, depth)) return false;
        for (const auto& [t, c] : u->arg->entries())
            if (!locally_closed_at(t, depth)) return false;
        return true;
    }
    }
    return true;
}

bool locally_closed(const SimplePtr& u) { return locally_closed_at(u, 0); }

bool locally_closed(const AlgebraicTerm& s) {
    for (const auto& [t, c] : s.entries())
        if (!locally_closed_at(t, 0)) return false;
    return true;
}

std::optional<SimplePtr> convert_ring(const SimplePtr& u, Semiring target) {
    switch (u->kind) {
    case SimpleTerm::Kind::FreeVar:
    case SimpleTerm::Kind::BoundVar: return u;
    case SimpleTerm::Kind::Lam: {
        auto body = convert_ring(u->sub, target);
        if (!body) return std::nullopt;
        return slam(*body);
    }
    case SimpleTerm::Kind::App: {
        auto fun = convert_ring(u->sub, target);
        auto arg = convert_ring(*u->arg, target);
        if (!fun || !arg) return std::nullopt;
        return sapp(*fun, share(*arg));
    }
    }
    return std::nullopt;
}

std::optional<AlgebraicTerm> convert_ring(const AlgebraicTerm& s, Semiring target) {
    std::vector<AlgebraicTerm::Entry> entries;
    for (const auto& [t, c] : s.entries()) {
        auto t2 = convert_ring(t, target);
        auto c2 = c.convert(target);
        if (!t2 || !c2) return std::nullopt;
        entries.emplace_back(*t2, *c2);
    }
    return AlgebraicTerm::build(target, std::move(entries));
}

namespace {

SimplePtr shift_simple_at(const SimplePtr& u, int by, int cutoff);

AlgebraicTerm shift_alg_at(const AlgebraicTerm& s, int by, int cutoff) {
    std::vector<AlgebraicTerm::Entry> entries;
    entries.reserve(s.entries().size());
    for (const auto& [t, c] : s.entries())
        entries.emplace_back(shift_simple_at(t, by, cutoff), c);
    return AlgebraicTerm::build(s.ring(), std::move(entries));
}

// Lift dangling indices (>= cutoff) by `by` when a combination moves under
// additional binders.
SimplePtr shift_simple_at(const SimplePtr& u, int by, int cutoff) {
    switch (u->kind) {
    case SimpleTerm::Kind::FreeVar: return u;
    case SimpleTerm::Kind::BoundVar:
        return u->index >= cutoff ? sbound(u->index + by) : u;
    case SimpleTerm::Kind::Lam:
        return slam(shift_simple_at(u->sub, by, cutoff + 1));
    case SimpleTerm::Kind::App:
        return sapp(shift_simple_at(u->sub, by, cutoff),
                    share(shift_alg_at(*u->arg, by, cutoff)));
    }
    return u;
}

// Shared recursion for substitution of free variables and β-instantiation of
// bound indices: both map a simple term to a combination and extend linearly.
struct Replacer {
    const std::string* name = nullptr; // free-variable substitution
    bool by_index = false;             // bound-index instantiation
    const AlgebraicTerm& repl;

    AlgebraicTerm lifted_repl(int depth) const {
        return depth == 0 ? repl : shift_alg_at(repl, depth, 0);
    }

    AlgebraicTerm on_simple(const SimplePtr& u, int depth) const {
        Semiring ring = repl.ring();
        switch (u->kind) {
        case SimpleTerm::Kind::FreeVar:
            if (name && u->name == *name) return lifted_repl(depth);
            return AlgebraicTerm::singleton(u, Coeff::one(ring));
        case SimpleTerm::Kind::BoundVar:
            if (by_index) {
                if (u->index == depth) return lifted_repl(depth);
                if (u->index > depth)
                    return AlgebraicTerm::singleton(sbound(u->index - 1), Coeff::one(ring));
            }
            return AlgebraicTerm::singleton(u, Coeff::one(ring));
        case SimpleTerm::Kind::Lam:
            return lam_of(on_simple(u->sub, depth + 1));
        case SimpleTerm::Kind::App:
            return app_of(on_simple(u->sub, depth), on_alg(*u->arg, depth));
        }
        return AlgebraicTerm(ring);
    }

    AlgebraicTerm on_alg(const AlgebraicTerm& s, int depth) const {
        AlgebraicTerm out(repl.ring());
        for (const auto& [t, c] : s.entries())
            out = out.plus(on_simple(t, depth).scaled(c));
        return out;
    }
};

} // namespace

AlgebraicTerm subst(const SimplePtr& u, const std::string& x, const AlgebraicTerm& r) {
    return Replacer{&x, false, r}.on_simple(u, 0);
}

AlgebraicTerm subst(const AlgebraicTerm& s, const std::string& x, const AlgebraicTerm& r) {
    if (s.ring() != r.ring()) throw UsageError("subst: mixed semirings");
    return Replacer{&x, false, r}.on_alg(s, 0);
}

AlgebraicTerm instantiate(const SimplePtr& body, const AlgebraicTerm& arg) {
    return Replacer{nullptr, true, arg}.on_simple(body, 0);
}

AlgebraicTerm instantiate(const AlgebraicTerm& body, const AlgebraicTerm& arg) {
    if (body.ring() != arg.ring()) throw UsageError("instantiate: mixed semirings");
    return Replacer{nullptr, true, arg}.on_alg(body, 0);
}

static SimplePtr open_simple_at(const SimplePtr& u, int depth, const std::string& x);

static AlgebraicTerm open_alg_at(const AlgebraicTerm& s, int depth, const std::string& x) {
    std::vector<AlgebraicTerm::Entry> entries;
    entries.reserve(s.entries().size());
    for (const auto& [t, c] : s.entries())
        entries.emplace_back(open_simple_at(t, depth, x), c);
    return AlgebraicTerm::build(s.ring(), std::move(entries));
}

static SimplePtr open_simple_at(const SimplePtr& u, int depth, const std::string& x) {
    switch (u->kind) {
    case SimpleTerm::Kind::FreeVar: return u;
    case SimpleTerm::Kind::BoundVar:
        if (u->index == depth) return svar(x);
        if (u->index > depth) return sbound(u->index - 1);
        return u;
    case SimpleTerm::Kind::Lam: return slam(open_simple_at(u->sub, depth + 1, x));
    case SimpleTerm::Kind::App:
        return sapp(open_simple_at(u->sub, depth, x),
                    share(open_alg_at(*u->arg, depth, x)));
    }
    return u;
}

SimplePtr open_simple(const SimplePtr& body, const std::string& x, int depth) {
    return open_simple_at(body, depth, x);
}

AlgebraicTerm open_alg(const AlgebraicTerm& body, const std::string& x, int depth) {
    return open_alg_at(body, depth, x);
}

static SimplePtr close_simple_at(const SimplePtr& u, int depth, const std::string& x);

static AlgebraicTerm close_alg_at(const AlgebraicTerm& s, int depth, const std::string& x) {
    std::vector<AlgebraicTerm::Entry> entries;
    entries.reserve(s.entries().size());
    for (const auto& [t, c] : s.entries())
        entries.emplace_back(close_simple_at(t, depth, x), c);
    return AlgebraicTerm::build(s.ring(), std::move(entries));
}

static SimplePtr close_simple_at(const SimplePtr& u, int depth, const std::string& x) {
    switch (u->kind) {
    case SimpleTerm::Kind::FreeVar:
        return u->name == x ? sbound(depth) : u;
    case SimpleTerm::Kind::BoundVar:
        return u->index >= depth ? sbound(u->index + 1) : u;
    case SimpleTerm::Kind::Lam: return slam(close_simple_at(u->sub, depth + 1, x));
    case SimpleTerm::Kind::App:
        return sapp(close_simple_at(u->sub, depth, x),
                    share(close_alg_at(*u->arg, depth, x)));
    }
    return u;
}

SimplePtr close_simple(const SimplePtr& t, const std::string& x, int depth) {
    return close_simple_at(t, depth, x);
}

AlgebraicTerm close_alg(const AlgebraicTerm& t, const std::string& x, int depth) {
    return close_alg_at(t, depth, x);
}

std::vector<SimplePtr> support(const AlgebraicTerm& s) {
    std::vector<SimplePtr> out;
    out.reserve(s.entries().size());
    for (const auto& [t, c] : s.entries()) out.push_back(t);
    return out;
}

namespace {

void sort_dedup(std::vector<PurePtr>& v) {
    std::sort(v.begin(), v.end(),
              [](const PurePtr& a, const PurePtr& b) { return compare(a, b) < 0; });
    v.erase(std::unique(v.begin(), v.end(),
                        [](const PurePtr& a, const PurePtr& b) { return equal(a, b); }),
            v.end());
}

std::vector<PurePtr> lam_sup_alg(const AlgebraicTerm& s);

std::vector<PurePtr> lam_sup_simple(const SimplePtr& u) {
    switch (u->kind) {
    case SimpleTerm::Kind::FreeVar: return {pvar(u->name)};
    case SimpleTerm::Kind::BoundVar: return {pbound(u->index)};
    case SimpleTerm::Kind::Lam: {
        std::vector<PurePtr> out;
        for (const auto& m : lam_sup_simple(u->sub)) out.push_back(plam(m));
        return out;
    }
    case SimpleTerm::Kind::App: {
        std::vector<PurePtr> out;
        auto funs = lam_sup_simple(u->sub);
        auto args = lam_sup_alg(*u->arg);
        for (const auto& f : funs)
            for (const auto& a : args) out.push_back(papp(f, a));
        return out;
    }
    }
    return {};
}

std::vector<PurePtr> lam_sup_alg(const AlgebraicTerm& s) {
    std::vector<PurePtr> out;
    for (const auto& [t, c] : s.entries()) {
        auto sub = lam_sup_simple(t);
        out.insert(out.end(), sub.begin(), sub.end());
    }
    sort_dedup(out);
    return out;
}

} // namespace

std::vector<PurePtr> lambda_support(const AlgebraicTerm& s) { return lam_sup_alg(s); }

int term_size(const SimplePtr& u) {
    switch (u->kind) {
    case SimpleTerm::Kind::FreeVar:
    case SimpleTerm::Kind::BoundVar: return 1;
    case SimpleTerm::Kind::Lam: return 1 + term_size(u->sub);
    case SimpleTerm::Kind::App: return 1 + term_size(u->sub) + term_size(*u->arg);
    }
    return 1;
}

int term_size(const AlgebraicTerm& s) {
    int n = 0;
    for (const auto& [t, c] : s.entries()) n += 1 + term_size(t);
    return n;
}

} // namespace alambda
