#include "gaps/monomial.hpp"

#include <algorithm>

#include "gaps/errors.hpp"

namespace gaps {

Monomial Monomial::var(int nvars, int k, int deg) {
    Monomial m = one(nvars);
    m.e[k] = static_cast<std::uint16_t>(deg);
    return m;
}

Monomial Monomial::operator*(const Monomial& o) const {
    if (e.size() != o.e.size()) throw InvalidArgument("Monomial: arity mismatch in product");
    Monomial r = *this;
    for (size_t i = 0; i < e.size(); ++i) {
        const int s = r.e[i] + o.e[i];
        if (s > 0xFFFF) throw InvalidArgument("Monomial: exponent overflow");
        r.e[i] = static_cast<std::uint16_t>(s);
    }
    return r;
}

bool Monomial::divides(const Monomial& o) const {
    if (e.size() != o.e.size()) throw InvalidArgument("Monomial: arity mismatch in divides");
    for (size_t i = 0; i < e.size(); ++i)
        if (e[i] > o.e[i]) return false;
    return true;
}

Monomial Monomial::quotient_of(const Monomial& o) const {
    Monomial r = o;
    for (size_t i = 0; i < e.size(); ++i) r.e[i] = static_cast<std::uint16_t>(o.e[i] - e[i]);
    return r;
}

Monomial lcm(const Monomial& a, const Monomial& b) {
    if (a.e.size() != b.e.size()) throw InvalidArgument("Monomial: arity mismatch in lcm");
    Monomial r = a;
    for (size_t i = 0; i < a.e.size(); ++i) r.e[i] = std::max(a.e[i], b.e[i]);
    return r;
}

bool coprime(const Monomial& a, const Monomial& b) {
    for (size_t i = 0; i < a.e.size(); ++i)
        if (a.e[i] && b.e[i]) return false;
    return true;
}

MonomialOrder MonomialOrder::grevlex(int nvars) {
    MonomialOrder o;
    o.kind = OrderKind::Grevlex;
    o.precedence.resize(nvars);
    for (int i = 0; i < nvars; ++i) o.precedence[i] = i;
    return o;
}

MonomialOrder MonomialOrder::grlex(int nvars) {
    MonomialOrder o = grevlex(nvars);
    o.kind = OrderKind::Grlex;
    return o;
}

MonomialOrder MonomialOrder::lex(int nvars) {
    MonomialOrder o = grevlex(nvars);
    o.kind = OrderKind::Lex;
    return o;
}

int MonomialOrder::cmp(const Monomial& a, const Monomial& b) const {
    if (a.e.size() != b.e.size() || a.e.size() != precedence.size())
        throw InvalidArgument("MonomialOrder: arity mismatch");
    const int n = static_cast<int>(precedence.size());

    if (kind != OrderKind::Lex) {
        const int da = a.degree(), db = b.degree();
        if (da != db) return da < db ? -1 : 1;
    }
    if (kind == OrderKind::Grevlex) {
        // Equal total degree: the monomial whose trailing (least significant)
        // exponent difference is negative is the larger one.
        for (int i = n - 1; i >= 0; --i) {
            const int v = precedence[i];
            if (a.e[v] != b.e[v]) return a.e[v] > b.e[v] ? -1 : 1;
        }
        return 0;
    }
    for (int i = 0; i < n; ++i) {
        const int v = precedence[i];
        if (a.e[v] != b.e[v]) return a.e[v] > b.e[v] ? 1 : -1;
    }
    return 0;
}

std::string order_kind_name(OrderKind k) {
    switch (k) {
        case OrderKind::Grevlex: return "grevlex";
        case OrderKind::Grlex: return "grlex";
        case OrderKind::Lex: return "lex";
    }
    return "grevlex";
}

OrderKind order_kind_from_name(const std::string& name) {
    if (name == "grevlex") return OrderKind::Grevlex;
    if (name == "grlex") return OrderKind::Grlex;
    if (name == "lex") return OrderKind::Lex;
    throw ParseFailure("unknown monomial order: " + name);
}

std::string to_string(const Monomial& m, const std::vector<std::string>& var_names) {
    std::string s;
    for (int i = 0; i < m.nvars(); ++i) {
        if (m.e[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += var_names[i];
        if (m.e[i] > 1) s += "^" + std::to_string(m.e[i]);
    }
    return s.empty() ? "1" : s;
}

}  // namespace gaps
