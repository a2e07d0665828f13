#include "alambda/semiring.hpp"

#include <cctype>

namespace alambda {

std::string_view semiring_name(Semiring s) {
    switch (s) {
    case Semiring::Nat: return "nat";
    case Semiring::NonnegRat: return "rat+";
    case Semiring::Bool: return "bool";
    case Semiring::Int: return "int";
    }
    return "?";
}

std::optional<Semiring> semiring_from_name(std::string_view name) {
    if (name == "nat") return Semiring::Nat;
    if (name == "rat+") return Semiring::NonnegRat;
    if (name == "bool") return Semiring::Bool;
    if (name == "int") return Semiring::Int;
    return std::nullopt;
}

bool is_positive(Semiring s) { return s != Semiring::Int; }

Coeff Coeff::from_long(Semiring s, long v) {
    if (v < 0 && s != Semiring::Int)
        throw UsageError("negative coefficient is not a " +
                         std::string(semiring_name(s)) + " value");
    if (s == Semiring::Bool && v != 0 && v != 1)
        throw UsageError("bool coefficient must be 0 or 1");
    return Coeff(s, v);
}

Coeff Coeff::from_fraction(long num, long den) {
    if (num < 0 || den <= 0)
        throw UsageError("rat+ fraction needs num >= 0 and den > 0");
    mpq_class q(num, den);
    q.canonicalize();
    return Coeff(Semiring::NonnegRat, std::move(q));
}

Coeff Coeff::parse(std::string_view text, Semiring s) {
    auto fail = [&](const std::string& why) -> Coeff {
        throw ParseError("bad coefficient '" + std::string(text) + "': " + why, 1, 1);
    };
    if (text.empty()) return fail("empty");
    if (s == Semiring::Bool) {
        if (text == "T") return one(s);
        if (text == "F") return zero(s);
        return fail("expected T or F");
    }
    std::size_t i = 0;
    bool neg = false;
    if (text[0] == '-') {
        if (s != Semiring::Int) return fail("minus sign only valid over int");
        neg = true;
        i = 1;
    }
    std::size_t num_begin = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == num_begin) return fail("expected digits");
    std::string num(text.substr(num_begin, i - num_begin));
    if (i == text.size()) {
        mpq_class q{mpz_class(num)};
        if (neg) q = -q;
        return Coeff(s, std::move(q));
    }
    if (text[i] != '/') return fail("trailing junk");
    if (s != Semiring::NonnegRat) return fail("fractions are rat+ literals");
    ++i;
    std::size_t den_begin = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i != text.size() || i == den_begin) return fail("bad denominator");
    std::string den(text.substr(den_begin, i - den_begin));
    if (den[0] == '0') return fail("denominator must not start with 0");
    mpq_class q{mpz_class(num), mpz_class(den)};
    q.canonicalize();
    return Coeff(s, std::move(q));
}

void Coeff::require_same_ring(const Coeff& o, const char* op) const {
    if (ring_ != o.ring_)
        throw UsageError(std::string(op) + ": mixed semirings (" +
                         std::string(semiring_name(ring_)) + " vs " +
                         std::string(semiring_name(o.ring_)) + ")");
}

Coeff Coeff::add(const Coeff& o) const {
    require_same_ring(o, "add");
    if (ring_ == Semiring::Bool)
        return Coeff(ring_, (value_ != 0 || o.value_ != 0) ? 1 : 0);
    return Coeff(ring_, mpq_class(value_ + o.value_));
}

Coeff Coeff::mul(const Coeff& o) const {
    require_same_ring(o, "mul");
    if (ring_ == Semiring::Bool)
        return Coeff(ring_, (value_ != 0 && o.value_ != 0) ? 1 : 0);
    return Coeff(ring_, mpq_class(value_ * o.value_));
}

std::optional<Coeff> Coeff::minus_part(const Coeff& part) const {
    require_same_ring(part, "minus_part");
    if (ring_ == Semiring::Bool) {
        // c = a + b in the idempotent boolean semiring
        if (value_ == 0) return part.value_ == 0 ? std::optional<Coeff>(zero(ring_)) : std::nullopt;
        if (part.value_ == 0) return Coeff(ring_, 1);
        return Coeff(ring_, 0); // 1 = 1 + 0 (1 = 1 + 1 also holds; return the least)
    }
    mpq_class b(value_ - part.value_);
    if (ring_ != Semiring::Int && b < 0) return std::nullopt;
    return Coeff(ring_, std::move(b));
}

Coeff Coeff::half() const {
    if (ring_ != Semiring::NonnegRat)
        throw UsageError("half: only defined over rat+");
    return Coeff(ring_, mpq_class(value_ / 2));
}

std::optional<Coeff> Coeff::convert(Semiring target) const {
    if (target == ring_) return *this;
    if (!is_integral() && target != Semiring::NonnegRat) return std::nullopt;
    if (value_ < 0 && target != Semiring::Int) return std::nullopt;
    if (target == Semiring::Bool && value_ != 0 && value_ != 1) return std::nullopt;
    return Coeff(target, value_);
}

int Coeff::cmp(const Coeff& o) const {
    require_same_ring(o, "cmp");
    return mpq_cmp(value_.get_mpq_t(), o.value_.get_mpq_t());
}

std::string Coeff::str() const {
    if (ring_ == Semiring::Bool) return value_ == 0 ? "F" : "T";
    if (value_.get_den() == 1) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

PositivityVerdict positivity_probe(Semiring s,
                                   const std::vector<std::pair<Coeff, Coeff>>& samples) {
    for (const auto& [a, b] : samples) {
        if (a.ring() != s || b.ring() != s)
            throw UsageError("positivity_probe: sample outside the probed semiring");
        if (a.add(b).is_zero() && !(a.is_zero() && b.is_zero()))
            return PositivityCounterexample{a, b};
    }
    return std::monostate{};
}

} // namespace alambda
