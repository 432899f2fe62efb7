#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cnofs/soundness.h"

namespace cnofs {

// 60 significant decimal digits; constants such as e are evaluated at this
// precision.
using BigFloat = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<60>>;

struct BoundInput {
  uint64_t ell = 1;
  uint64_t q = 0;
  uint32_t n = 128;
  Rational p_triv = 0;
  uint32_t r = 1;
  uint64_t l0 = 2;
  uint64_t kappa = 1;
  uint64_t challenge_count = 2;  // |C| per repetition, for the reduction table
};

// Throws InvalidChallenge on inputs outside the domain (p_triv not in [0,1],
// zero l, n, r, l0, kappa or |C|).
void ValidateBoundInput(const BoundInput& in);

struct Bound {
  BigFloat value;
  // Present when the value is rational, e.g. when every logarithm involved
  // is an integer.
  std::optional<Rational> exact;
};

// The extraction-error bound in its unsimplified form and the closed form
// with integer constants. The closed form is not assumed to dominate; the
// comparison is reported.
struct TwoFormBound {
  BigFloat unsimplified;
  Bound simplified;
  bool simplified_dominates = false;
};

// Ordinary commitments:
//   2(kappa+1) 2^-n + (2e q^{3/2} 2^{-n/2} + q sqrt(10 max(q l 2^-n, p)))^2
//   <= (22 l + 60) q^3 2^-n + 20 q^2 p
TwoFormBound EpsExOrdinary(const BoundInput& in);

// Merkle commitments, log base 2:
//   2(kappa log l + 1) 2^-n + (2e q^{3/2} 2^{-n/2} + q sqrt(10 max(q l 2^{1-n}, p)))^2
//   <= (22 l log l + 60) q^3 2^-n + 20 q^2 p
TwoFormBound EpsExMerkle(const BoundInput& in);

// Unruh transform over r repetitions of an l0-challenge sigma protocol:
//   (22 r l0 + 60) q^3 2^-n + 20 q^2 p^r
Bound EpsUnruh(const BoundInput& in);

// Merkle variant: (22 r l0 log(r l0) + 60) q^3 2^-n + 20 q^2 p^r
Bound EpsMppu(const BoundInput& in);

enum class CommitmentVariant { kOrdinary, kMerkle };

// 2e q^{3/2} 2^{-n/2} + q sqrt(10 max(q l 2^-n, p)); the Merkle variant
// doubles q l 2^-n.
BigFloat CapacityBound(const BoundInput& in, CommitmentVariant variant);

struct Table1Row {
  std::string name;
  Rational value;
  // Constant 1 in place of the unspecified big-O constant.
  bool asymptotic = false;
  // <= 0 or <= 2^-n.
  bool vacuous = false;
  // <= 2^{-n/3}: below the cost of a generic quantum collision search on an
  // n-bit hash, so the guarantee says nothing at that output length.
  bool below_collision_level = false;
};

// Reduction guarantees for an adversary of success probability eps, using
// q, r, n, l and |C| from `in`:
//   eps^3/q^6, eps/q^2, eps - g with g = C^-r + r q 2^{-n/2} + q^3 2^-n, and
//   eps - h with h = (22 l + 60) q^3 2^-n + 20 q^2 C^-r.
// Requires q >= 1 and eps in (0, 1].
std::vector<Table1Row> Table1Compare(const Rational& eps, const BoundInput& in);

BigFloat ToBigFloat(const Rational& v);
// log2 of a positive value; -inf for zero.
BigFloat Log2(const BigFloat& v);

// Accepts "2^-128", "2^(-128)", "a/b", integers and decimals with an
// optional exponent ("0.25", "1e-6"). Throws ParseError.
Rational ParseProbability(std::string_view text);

// Scientific notation with `digits` significant digits.
std::string FormatSci(const BigFloat& v, int digits = 12);

}  // namespace cnofs
