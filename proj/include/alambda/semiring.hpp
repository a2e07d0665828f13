#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "alambda/errors.hpp"

namespace alambda {

/// The coefficient semirings the calculus can run over. Nat, NonnegRat and
/// Bool are positive (a + b = 0 forces a = b = 0); Int is deliberately not,
/// and is admitted only for the inconsistency demonstration.
enum class Semiring { Nat, NonnegRat, Bool, Int };

std::string_view semiring_name(Semiring s); // "nat" | "rat+" | "bool" | "int"
std::optional<Semiring> semiring_from_name(std::string_view name);

/// Metadata flag, validated (not proved) by positivity_probe in the tests.
bool is_positive(Semiring s);

/// An exact semiring element. Values are arbitrary-precision: integers for
/// Nat/Int, fractions in lowest terms with positive denominator for
/// NonnegRat, and {0, 1} for Bool (where 1 + 1 = 1). No floating point.
class Coeff {
public:
    static Coeff zero(Semiring s) { return Coeff(s, 0); }
    static Coeff one(Semiring s) { return Coeff(s, 1); }
    static Coeff from_long(Semiring s, long v);
    static Coeff from_fraction(long num, long den); // NonnegRat

    /// Literal grammar: `'-'? [0-9]+` (minus only for Int),
    /// `[0-9]+ '/' [1-9][0-9]*` (NonnegRat only), `T` / `F` (Bool only).
    /// Throws ParseError (position 1:1) on malformed or out-of-semiring text.
    static Coeff parse(std::string_view text, Semiring s);

    Semiring ring() const { return ring_; }
    bool is_zero() const { return value_ == 0; }
    bool is_one() const { return value_ == 1; }

    /// True when the value is an integer (always, except proper fractions).
    bool is_integral() const { return value_.get_den() == 1; }

    /// Integer value, valid only when is_integral() and small enough.
    long to_long() const { return mpz_get_si(value_.get_num().get_mpz_t()); }

    Coeff add(const Coeff& o) const;
    Coeff mul(const Coeff& o) const;

    /// b such that *this = part + b, if one exists in this semiring.
    std::optional<Coeff> minus_part(const Coeff& part) const;

    /// Exact halving; only meaningful over NonnegRat.
    Coeff half() const;

    /// Re-tag into another semiring when the value is representable there.
    std::optional<Coeff> convert(Semiring target) const;

    bool operator==(const Coeff& o) const {
        return ring_ == o.ring_ && value_ == o.value_;
    }
    bool operator!=(const Coeff& o) const { return !(*this == o); }

    /// Total order on values within one semiring (Bool: F < T).
    int cmp(const Coeff& o) const;

    /// Canonical literal: decimal integer, `p/q`, or `T`/`F`.
    std::string str() const;

private:
    Coeff(Semiring s, long v) : ring_(s), value_(v) {}
    Coeff(Semiring s, mpq_class v) : ring_(s), value_(std::move(v)) {}
    void require_same_ring(const Coeff& o, const char* op) const;

    Semiring ring_;
    mpq_class value_; // canonicalized by GMP (lowest terms, positive den)
};

/// Outcome of probing the positivity hypothesis on sample pairs: either all
/// sampled sums behaved positively, or a witness pair with a + b = 0 and
/// (a, b) != (0, 0).
struct PositivityCounterexample {
    Coeff a;
    Coeff b;
};
using PositivityVerdict = std::variant<std::monostate, PositivityCounterexample>;

PositivityVerdict positivity_probe(Semiring s,
                                   const std::vector<std::pair<Coeff, Coeff>>& samples);

} // namespace alambda
