#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace gaps {

// Exponent vector of a monomial in a fixed set of variables.
struct Monomial {
    std::vector<std::uint16_t> e;

    Monomial() = default;
    explicit Monomial(std::vector<std::uint16_t> exps) : e(std::move(exps)) {}

    static Monomial one(int nvars) { return Monomial(std::vector<std::uint16_t>(nvars, 0)); }
    static Monomial var(int nvars, int k, int deg = 1);

    int nvars() const { return static_cast<int>(e.size()); }
    int degree() const { return std::accumulate(e.begin(), e.end(), 0); }
    bool is_one() const {
        for (auto v : e)
            if (v) return false;
        return true;
    }

    // Checked product; throws on exponent overflow or arity mismatch.
    Monomial operator*(const Monomial& o) const;
    bool divides(const Monomial& o) const;
    // Quotient o = (*this) * result; pre: divides(o).
    Monomial quotient_of(const Monomial& o) const;

    // Structural comparison (arity, then exponents); used for keyed lookups,
    // not for term ordering.
    auto operator<=>(const Monomial&) const = default;
};

Monomial lcm(const Monomial& a, const Monomial& b);
bool coprime(const Monomial& a, const Monomial& b);

enum class OrderKind { Grevlex, Grlex, Lex };

// Total multiplicative monomial order with 1 minimal. precedence[0] is the
// most significant variable.
struct MonomialOrder {
    OrderKind kind = OrderKind::Grevlex;
    std::vector<int> precedence;

    static MonomialOrder grevlex(int nvars);
    static MonomialOrder grlex(int nvars);
    static MonomialOrder lex(int nvars);

    // -1 if a < b, 0 if equal, +1 if a > b.
    int cmp(const Monomial& a, const Monomial& b) const;
    bool less(const Monomial& a, const Monomial& b) const { return cmp(a, b) < 0; }
    bool greater(const Monomial& a, const Monomial& b) const { return cmp(a, b) > 0; }

    bool operator==(const MonomialOrder&) const = default;
};

std::string order_kind_name(OrderKind k);
OrderKind order_kind_from_name(const std::string& name);

// Renders e.g. "x^2*y" given variable names; "1" for the unit monomial.
std::string to_string(const Monomial& m, const std::vector<std::string>& var_names);

}  // namespace gaps
