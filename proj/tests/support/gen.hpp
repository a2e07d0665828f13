#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "alambda/reduction.hpp"

namespace alambda::testgen {

// Deterministic across platforms: raw engine output reduced by modulo,
// never the implementation-defined standard distributions.
struct Rng {
    std::mt19937_64 eng;

    explicit Rng(std::uint64_t seed) : eng(seed) {}

    std::uint64_t below(std::uint64_t n) { return n ? eng() % n : 0; }
    bool chance(unsigned pct) { return below(100) < pct; }
};

inline const std::vector<std::string>& free_names() {
    static const std::vector<std::string> names{"x", "y", "z"};
    return names;
}

// Pure term with at most `size` constructors; bound indices stay valid for
// the given binder depth.
inline PurePtr random_pure(Rng& rng, int size, int depth = 0) {
    if (size <= 1 || rng.chance(25)) {
        if (depth > 0 && rng.chance(50))
            return pbound(static_cast<int>(rng.below(depth)));
        return pvar(free_names()[rng.below(free_names().size())]);
    }
    if (rng.chance(45)) return plam(random_pure(rng, size - 1, depth + 1));
    int left = 1 + static_cast<int>(rng.below(size - 1));
    return papp(random_pure(rng, left, depth),
                random_pure(rng, size - 1 - left, depth));
}

inline Coeff random_coeff(Rng& rng, Semiring ring, bool nonzero = false) {
    switch (ring) {
    case Semiring::Nat:
        return Coeff::from_long(ring, static_cast<long>(rng.below(4)) + (nonzero ? 1 : 0));
    case Semiring::Int: {
        long v = static_cast<long>(rng.below(7)) - 3;
        if (nonzero && v == 0) v = 1;
        return Coeff::from_long(ring, v);
    }
    case Semiring::Bool:
        return nonzero || rng.chance(70) ? Coeff::one(ring) : Coeff::zero(ring);
    case Semiring::NonnegRat: {
        long num = static_cast<long>(rng.below(5)) + (nonzero ? 1 : 0);
        long den = 1 + static_cast<long>(rng.below(4));
        return Coeff::from_fraction(num, den);
    }
    }
    return Coeff::one(ring);
}

// Raw term with sums, scalings and zeros mixed in.
inline RawPtr random_raw(Rng& rng, Semiring ring, int size, int depth = 0) {
    if (size <= 1) {
        if (rng.chance(10)) return rzero();
        if (depth > 0 && rng.chance(50))
            return rbound(static_cast<int>(rng.below(depth)));
        return rvar(free_names()[rng.below(free_names().size())]);
    }
    switch (rng.below(5)) {
    case 0: return rlam(random_raw(rng, ring, size - 1, depth + 1));
    case 1: {
        int left = 1 + static_cast<int>(rng.below(size - 1));
        return rapp(random_raw(rng, ring, left, depth),
                    random_raw(rng, ring, size - 1 - left, depth));
    }
    case 2: {
        int left = 1 + static_cast<int>(rng.below(size - 1));
        return rsum(random_raw(rng, ring, left, depth),
                    random_raw(rng, ring, size - 1 - left, depth));
    }
    case 3: return rscale(random_coeff(rng, ring), random_raw(rng, ring, size - 1, depth));
    default: return random_raw(rng, ring, size - 1, depth);
    }
}

inline AlgebraicTerm random_alg(Rng& rng, Semiring ring, int size) {
    return canonicalize(random_raw(rng, ring, size), ring);
}

// Biased toward β-redexes and small sums, for joinability probes that need
// terms with several distinct one-step reducts.
inline RawPtr random_redexy(Rng& rng, Semiring ring, int size, int depth = 0) {
    if (size <= 2) {
        if (depth > 0 && rng.chance(50))
            return rbound(static_cast<int>(rng.below(depth)));
        return rvar(free_names()[rng.below(free_names().size())]);
    }
    switch (rng.below(6)) {
    case 0:
    case 1: { // a redex
        int body = 1 + static_cast<int>(rng.below(size - 2));
        return rapp(rlam(random_redexy(rng, ring, body, depth + 1)),
                    random_redexy(rng, ring, size - 2 - body, depth));
    }
    case 2: {
        int left = 1 + static_cast<int>(rng.below(size - 1));
        return rapp(random_redexy(rng, ring, left, depth),
                    random_redexy(rng, ring, size - 1 - left, depth));
    }
    case 3: {
        int left = 1 + static_cast<int>(rng.below(size - 1));
        return rsum(random_redexy(rng, ring, left, depth),
                    random_redexy(rng, ring, size - 1 - left, depth));
    }
    case 4:
        return rscale(random_coeff(rng, ring, /*nonzero=*/true),
                      random_redexy(rng, ring, size - 1, depth));
    default: return rlam(random_redexy(rng, ring, size - 1, depth + 1));
    }
}

inline AlgebraicTerm random_redexy_alg(Rng& rng, Semiring ring, int size) {
    return canonicalize(random_redexy(rng, ring, size), ring);
}

// All raw-term positions together with their binder depth.
inline void collect_positions(const RawPtr& t, Pos& cur, int depth,
                              std::vector<std::pair<Pos, int>>& out) {
    out.emplace_back(cur, depth);
    switch (t->kind) {
    case RawTerm::Kind::Lam:
        cur.push_back(0);
        collect_positions(t->left, cur, depth + 1, out);
        cur.pop_back();
        break;
    case RawTerm::Kind::Scale:
        cur.push_back(0);
        collect_positions(t->left, cur, depth, out);
        cur.pop_back();
        break;
    case RawTerm::Kind::App:
    case RawTerm::Kind::Sum:
        cur.push_back(0);
        collect_positions(t->left, cur, depth, out);
        cur.back() = 1;
        collect_positions(t->right, cur, depth, out);
        cur.pop_back();
        break;
    default: break;
    }
}

inline std::vector<std::pair<Pos, int>> positions_of(const RawPtr& t) {
    std::vector<std::pair<Pos, int>> out;
    Pos cur;
    collect_positions(t, cur, 0, out);
    return out;
}

inline RawPtr replace_at(const RawPtr& t, const Pos& pos, std::size_t i,
                         const RawPtr& sub) {
    if (i == pos.size()) return sub;
    switch (t->kind) {
    case RawTerm::Kind::Lam:
        return rlam(replace_at(t->left, pos, i + 1, sub));
    case RawTerm::Kind::Scale:
        return rscale(*t->coeff, replace_at(t->left, pos, i + 1, sub));
    case RawTerm::Kind::App:
        return pos[i] == 0 ? rapp(replace_at(t->left, pos, i + 1, sub), t->right)
                           : rapp(t->left, replace_at(t->right, pos, i + 1, sub));
    case RawTerm::Kind::Sum:
        return pos[i] == 0 ? rsum(replace_at(t->left, pos, i + 1, sub), t->right)
                           : rsum(t->left, replace_at(t->right, pos, i + 1, sub));
    default: return sub;
    }
}

// Algebraic-equality rewrites: the six linearity axioms and five module
// laws, instantiated with fresh random subterms valid at binder depth d.
struct RewritePair {
    RawPtr lhs;
    RawPtr rhs;
};

inline RewritePair make_rewrite(Rng& rng, Semiring ring, int axiom, int depth) {
    auto sub = [&](int extra_depth = 0) {
        return random_raw(rng, ring, 3 + static_cast<int>(rng.below(3)),
                          depth + extra_depth);
    };
    switch (axiom) {
    case 0: return {rlam(rzero()), rzero()};
    case 1: {
        auto m = sub(1), n = sub(1);
        return {rlam(rsum(m, n)), rsum(rlam(m), rlam(n))};
    }
    case 2: {
        auto m = sub(1);
        Coeff a = random_coeff(rng, ring);
        return {rlam(rscale(a, m)), rscale(a, rlam(m))};
    }
    case 3: return {rapp(rzero(), sub()), rzero()};
    case 4: {
        auto m = sub(), n = sub(), p = sub();
        return {rapp(rsum(m, n), p), rsum(rapp(m, p), rapp(n, p))};
    }
    case 5: {
        auto m = sub(), p = sub();
        Coeff a = random_coeff(rng, ring);
        return {rapp(rscale(a, m), p), rscale(a, rapp(m, p))};
    }
    case 6: {
        auto m = sub(), n = sub();
        return {rsum(m, n), rsum(n, m)};
    }
    case 7: {
        auto m = sub(), n = sub(), p = sub();
        return {rsum(rsum(m, n), p), rsum(m, rsum(n, p))};
    }
    case 8: {
        auto m = sub();
        return {rsum(m, rzero()), m};
    }
    case 9: {
        auto m = sub();
        Coeff a = random_coeff(rng, ring), b = random_coeff(rng, ring);
        return {rscale(a, rscale(b, m)), rscale(a.mul(b), m)};
    }
    case 10: {
        auto m = sub(), n = sub();
        Coeff a = random_coeff(rng, ring);
        return {rscale(a, rsum(m, n)), rsum(rscale(a, m), rscale(a, n))};
    }
    default: return {rzero(), rzero()};
    }
}

inline constexpr int kNumRewrites = 11;

// All pure terms of exactly `size` constructors over three free variables.
inline void enumerate_pure(int size, int depth, std::vector<PurePtr>& out) {
    if (size == 1) {
        for (const auto& n : free_names()) out.push_back(pvar(n));
        for (int i = 0; i < depth; ++i) out.push_back(pbound(i));
        return;
    }
    std::vector<PurePtr> bodies;
    enumerate_pure(size - 1, depth + 1, bodies);
    for (auto& b : bodies) out.push_back(plam(b));
    for (int left = 1; left <= size - 2; ++left) {
        std::vector<PurePtr> fs, as;
        enumerate_pure(left, depth, fs);
        enumerate_pure(size - 1 - left, depth, as);
        for (auto& f : fs)
            for (auto& a : as) out.push_back(papp(f, a));
    }
}

inline std::vector<PurePtr> all_pure_up_to(int max_size) {
    std::vector<PurePtr> out;
    for (int s = 1; s <= max_size; ++s) enumerate_pure(s, 0, out);
    return out;
}

} // namespace alambda::testgen
