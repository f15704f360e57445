#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gaps/rng.hpp"

namespace gaps {

// Canonical residue in [0, p). All zp functions expect and return canonical
// values.
using FieldElem = std::uint64_t;

// An odd prime modulus p with p*p < 2^64, so products of canonical residues
// never overflow. Primality is checked at construction.
struct FieldSpec {
    std::uint64_t p;

    explicit FieldSpec(std::uint64_t prime);

    FieldElem reduce(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(p);
        if (r < 0) r += static_cast<std::int64_t>(p);
        return static_cast<FieldElem>(r);
    }

    FieldElem add(FieldElem a, FieldElem b) const {
        FieldElem s = a + b;
        return s >= p ? s - p : s;
    }
    FieldElem sub(FieldElem a, FieldElem b) const {
        return a >= b ? a - b : a + p - b;
    }
    FieldElem neg(FieldElem a) const { return a == 0 ? 0 : p - a; }
    FieldElem mul(FieldElem a, FieldElem b) const { return (a * b) % p; }

    FieldElem pow(FieldElem base, std::uint64_t e) const;
};

// Dense row-major matrix of canonical residues.
struct ZpMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<FieldElem> a;

    ZpMatrix() = default;
    ZpMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

    FieldElem& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    FieldElem at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static ZpMatrix identity(int n);
    bool operator==(const ZpMatrix&) const = default;
};

// Multiplicative inverse via the extended Euclidean algorithm.
// Throws InvalidArgument for z = 0.
FieldElem zp_inv(FieldElem z, const FieldSpec& spec);

// Euler's criterion: true iff z = 0 or z^((p-1)/2) = 1 (mod p).
bool zp_euler_is_residue(FieldElem z, const FieldSpec& spec);

// Square roots of z. Returns {r, p-r} when z is a quadratic residue,
// {0, 0} for z = 0, nullopt when no root exists. Uses the z^((p+1)/4)
// shortcut for p = 3 (mod 4) and Tonelli-Shanks otherwise.
std::optional<std::pair<FieldElem, FieldElem>> zp_sqrt(FieldElem z, const FieldSpec& spec);

// Reduced row-echelon form. Returns the RREF and the pivot column indices.
std::pair<ZpMatrix, std::vector<int>> zp_rref(const ZpMatrix& m, const FieldSpec& spec);

// Nullspace basis as columns; column count = cols - rank.
ZpMatrix zp_nullspace(const ZpMatrix& m, const FieldSpec& spec);

// Random vector with sum of squares = 1 (mod p), by rejection sampling.
// Throws GenerationFailure after max_tries rejections.
std::vector<FieldElem> zp_rand_unit(int n, const FieldSpec& spec, Rng& rng,
                                    int max_tries = 1000);

// Rotation matrix from a unit quaternion (sigma, u1, u2, u3):
//   R = 2(u u^T - sigma [u]x) + (sigma^2 - |u|^2) I.
// Throws InvalidArgument when the quaternion is not unit-norm.
ZpMatrix zp_quat_to_rotation(const std::vector<FieldElem>& q, const FieldSpec& spec);

// Matrix helpers used by samplers and validation.
ZpMatrix zp_matmul(const ZpMatrix& a, const ZpMatrix& b, const FieldSpec& spec);
ZpMatrix zp_transpose(const ZpMatrix& m);
FieldElem zp_det3(const ZpMatrix& m, const FieldSpec& spec);

}  // namespace gaps
