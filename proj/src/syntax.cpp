#include "alambda/syntax.hpp"

namespace alambda {

PurePtr pvar(std::string name) {
    auto t = std::make_shared<PureTerm>();
    t->kind = PureTerm::Kind::FreeVar;
    t->name = std::move(name);
    return t;
}

PurePtr pbound(int index) {
    auto t = std::make_shared<PureTerm>();
    t->kind = PureTerm::Kind::BoundVar;
    t->index = index;
    return t;
}

PurePtr plam(PurePtr body) {
    auto t = std::make_shared<PureTerm>();
    t->kind = PureTerm::Kind::Lam;
    t->left = std::move(body);
    return t;
}

PurePtr papp(PurePtr fun, PurePtr arg) {
    auto t = std::make_shared<PureTerm>();
    t->kind = PureTerm::Kind::App;
    t->left = std::move(fun);
    t->right = std::move(arg);
    return t;
}

std::strong_ordering compare(const PurePtr& a, const PurePtr& b) {
    if (a.get() == b.get()) return std::strong_ordering::equal;
    if (auto c = static_cast<int>(a->kind) <=> static_cast<int>(b->kind); c != 0)
        return c;
    switch (a->kind) {
    case PureTerm::Kind::BoundVar: return a->index <=> b->index;
    case PureTerm::Kind::FreeVar: return a->name <=> b->name;
    case PureTerm::Kind::Lam: return compare(a->left, b->left);
    case PureTerm::Kind::App:
        if (auto c = compare(a->left, b->left); c != 0) return c;
        return compare(a->right, b->right);
    }
    return std::strong_ordering::equal;
}

bool equal(const PurePtr& a, const PurePtr& b) {
    return compare(a, b) == std::strong_ordering::equal;
}

static bool locally_closed_at(const PurePtr& t, int depth) {
    switch (t->kind) {
    case PureTerm::Kind::BoundVar: return t->index < depth;
    case PureTerm::Kind::FreeVar: return true;
    case PureTerm::Kind::Lam: return locally_closed_at(t->left, depth + 1);
    case PureTerm::Kind::App:
        return locally_closed_at(t->left, depth) && locally_closed_at(t->right, depth);
    }
    return true;
}

bool locally_closed(const PurePtr& t) { return locally_closed_at(t, 0); }

void collect_free_vars(const PurePtr& t, std::set<std::string>& out) {
    switch (t->kind) {
    case PureTerm::Kind::FreeVar: out.insert(t->name); break;
    case PureTerm::Kind::BoundVar: break;
    case PureTerm::Kind::Lam: collect_free_vars(t->left, out); break;
    case PureTerm::Kind::App:
        collect_free_vars(t->left, out);
        collect_free_vars(t->right, out);
        break;
    }
}

std::set<std::string> free_vars(const PurePtr& t) {
    std::set<std::string> out;
    collect_free_vars(t, out);
    return out;
}

// Lift dangling indices (>= cutoff) by `by`: needed when a term moves under
// additional binders.
static PurePtr shift_at(const PurePtr& t, int by, int cutoff) {
    switch (t->kind) {
    case PureTerm::Kind::BoundVar:
        return t->index >= cutoff ? pbound(t->index + by) : t;
    case PureTerm::Kind::FreeVar: return t;
    case PureTerm::Kind::Lam: return plam(shift_at(t->left, by, cutoff + 1));
    case PureTerm::Kind::App:
        return papp(shift_at(t->left, by, cutoff), shift_at(t->right, by, cutoff));
    }
    return t;
}

static PurePtr instantiate_at(const PurePtr& t, int depth, const PurePtr& arg) {
    switch (t->kind) {
    case PureTerm::Kind::BoundVar:
        if (t->index == depth)
            return depth == 0 ? arg : shift_at(arg, depth, 0);
        if (t->index > depth) return pbound(t->index - 1);
        return t;
    case PureTerm::Kind::FreeVar: return t;
    case PureTerm::Kind::Lam: return plam(instantiate_at(t->left, depth + 1, arg));
    case PureTerm::Kind::App:
        return papp(instantiate_at(t->left, depth, arg),
                    instantiate_at(t->right, depth, arg));
    }
    return t;
}

PurePtr open_var(const PurePtr& body, const std::string& x) {
    return instantiate_at(body, 0, pvar(x));
}

PurePtr instantiate(const PurePtr& body, const PurePtr& arg) {
    return instantiate_at(body, 0, arg);
}

static PurePtr close_at(const PurePtr& t, int depth, const std::string& x) {
    switch (t->kind) {
    case PureTerm::Kind::FreeVar:
        return t->name == x ? pbound(depth) : t;
    case PureTerm::Kind::BoundVar:
        return t->index >= depth ? pbound(t->index + 1) : t;
    case PureTerm::Kind::Lam: return plam(close_at(t->left, depth + 1, x));
    case PureTerm::Kind::App:
        return papp(close_at(t->left, depth, x), close_at(t->right, depth, x));
    }
    return t;
}

PurePtr close_var(const PurePtr& t, const std::string& x) {
    return close_at(t, 0, x);
}

PurePtr subst_free(const PurePtr& t, const std::string& x, const PurePtr& p) {
    switch (t->kind) {
    case PureTerm::Kind::FreeVar: return t->name == x ? p : t;
    case PureTerm::Kind::BoundVar: return t;
    case PureTerm::Kind::Lam: return plam(subst_free(t->left, x, p));
    case PureTerm::Kind::App:
        return papp(subst_free(t->left, x, p), subst_free(t->right, x, p));
    }
    return t;
}

int term_size(const PurePtr& t) {
    switch (t->kind) {
    case PureTerm::Kind::FreeVar:
    case PureTerm::Kind::BoundVar: return 1;
    case PureTerm::Kind::Lam: return 1 + term_size(t->left);
    case PureTerm::Kind::App: return 1 + term_size(t->left) + term_size(t->right);
    }
    return 1;
}

RawPtr rvar(std::string name) {
    auto t = std::make_shared<RawTerm>();
    t->kind = RawTerm::Kind::FreeVar;
    t->name = std::move(name);
    return t;
}

RawPtr rbound(int index) {
    auto t = std::make_shared<RawTerm>();
    t->kind = RawTerm::Kind::BoundVar;
    t->index = index;
    return t;
}

RawPtr rlam(RawPtr body) {
    auto t = std::make_shared<RawTerm>();
    t->kind = RawTerm::Kind::Lam;
    t->left = std::move(body);
    return t;
}

RawPtr rapp(RawPtr fun, RawPtr arg) {
    auto t = std::make_shared<RawTerm>();
    t->kind = RawTerm::Kind::App;
    t->left = std::move(fun);
    t->right = std::move(arg);
    return t;
}

RawPtr rzero() {
    auto t = std::make_shared<RawTerm>();
    t->kind = RawTerm::Kind::Zero;
    return t;
}

RawPtr rsum(RawPtr left, RawPtr right) {
    auto t = std::make_shared<RawTerm>();
    t->kind = RawTerm::Kind::Sum;
    t->left = std::move(left);
    t->right = std::move(right);
    return t;
}

RawPtr rscale(Coeff c, RawPtr body) {
    auto t = std::make_shared<RawTerm>();
    t->kind = RawTerm::Kind::Scale;
    t->coeff = std::move(c);
    t->left = std::move(body);
    return t;
}

std::strong_ordering compare(const RawPtr& a, const RawPtr& b) {
    if (a.get() == b.get()) return std::strong_ordering::equal;
    if (auto c = static_cast<int>(a->kind) <=> static_cast<int>(b->kind); c != 0)
        return c;
    switch (a->kind) {
    case RawTerm::Kind::FreeVar: return a->name <=> b->name;
    case RawTerm::Kind::BoundVar: return a->index <=> b->index;
    case RawTerm::Kind::Zero: return std::strong_ordering::equal;
    case RawTerm::Kind::Lam: return compare(a->left, b->left);
    case RawTerm::Kind::App:
    case RawTerm::Kind::Sum:
        if (auto c = compare(a->left, b->left); c != 0) return c;
        return compare(a->right, b->right);
    case RawTerm::Kind::Scale: {
        if (a->coeff->ring() != b->coeff->ring())
            return static_cast<int>(a->coeff->ring()) <=> static_cast<int>(b->coeff->ring());
        if (int c = a->coeff->cmp(*b->coeff); c != 0)
            return c <=> 0;
        return compare(a->left, b->left);
    }
    }
    return std::strong_ordering::equal;
}

bool alpha_eq(const RawPtr& a, const RawPtr& b) {
    return compare(a, b) == std::strong_ordering::equal;
}

bool is_pure(const RawPtr& t) {
    switch (t->kind) {
    case RawTerm::Kind::FreeVar:
    case RawTerm::Kind::BoundVar: return true;
    case RawTerm::Kind::Lam: return is_pure(t->left);
    case RawTerm::Kind::App: return is_pure(t->left) && is_pure(t->right);
    default: return false;
    }
}

std::optional<PurePtr> to_pure(const RawPtr& t) {
    switch (t->kind) {
    case RawTerm::Kind::FreeVar: return pvar(t->name);
    case RawTerm::Kind::BoundVar: return pbound(t->index);
    case RawTerm::Kind::Lam: {
        auto body = to_pure(t->left);
        if (!body) return std::nullopt;
        return plam(*body);
    }
    case RawTerm::Kind::App: {
        auto f = to_pure(t->left);
        auto a = to_pure(t->right);
        if (!f || !a) return std::nullopt;
        return papp(*f, *a);
    }
    default: return std::nullopt;
    }
}

RawPtr from_pure(const PurePtr& t) {
    switch (t->kind) {
    case PureTerm::Kind::FreeVar: return rvar(t->name);
    case PureTerm::Kind::BoundVar: return rbound(t->index);
    case PureTerm::Kind::Lam: return rlam(from_pure(t->left));
    case PureTerm::Kind::App: return rapp(from_pure(t->left), from_pure(t->right));
    }
    return rzero();
}

void collect_free_vars(const RawPtr& t, std::set<std::string>& out) {
    switch (t->kind) {
    case RawTerm::Kind::FreeVar: out.insert(t->name); break;
    case RawTerm::Kind::BoundVar:
    case RawTerm::Kind::Zero: break;
    case RawTerm::Kind::Lam:
    case RawTerm::Kind::Scale: collect_free_vars(t->left, out); break;
    case RawTerm::Kind::App:
    case RawTerm::Kind::Sum:
        collect_free_vars(t->left, out);
        collect_free_vars(t->right, out);
        break;
    }
}

int term_size(const RawPtr& t) {
    switch (t->kind) {
    case RawTerm::Kind::FreeVar:
    case RawTerm::Kind::BoundVar:
    case RawTerm::Kind::Zero: return 1;
    case RawTerm::Kind::Lam:
    case RawTerm::Kind::Scale: return 1 + term_size(t->left);
    case RawTerm::Kind::App:
    case RawTerm::Kind::Sum: return 1 + term_size(t->left) + term_size(t->right);
    }
    return 1;
}

PurePtr parse_pure(std::string_view text, Semiring ring) {
    auto raw = parse(text, ring);
    auto p = to_pure(raw);
    if (!p) throw UsageError("term is not pure: " + std::string(text));
    return *p;
}

std::string fresh_name(const std::set<std::string>& avoid) {
    static const char* pool[] = {"x", "y", "z", "w", "v", "u", "s", "t",
                                 "p", "q", "r", "f", "g", "h"};
    for (const char* c : pool)
        if (!avoid.count(c)) return c;
    for (int i = 1;; ++i) {
        std::string c = "x" + std::to_string(i);
        if (!avoid.count(c)) return c;
    }
}

} // namespace alambda
