#include "cnofs/params.h"

#include <bit>
#include <cctype>
#include <iomanip>
#include <limits>
#include <sstream>

namespace cnofs {

namespace {

using boost::multiprecision::cpp_int;

Rational Pow2(int64_t e) {
  if (e >= 0) return Rational(cpp_int(1) << static_cast<unsigned>(e));
  return Rational(cpp_int(1), cpp_int(1) << static_cast<unsigned>(-e));
}

Rational PowRational(const Rational& base, uint32_t e) {
  using boost::multiprecision::pow;
  return Rational(pow(numerator(base), e), pow(denominator(base), e));
}

BigFloat E() { return exp(BigFloat(1)); }

// log2 v when v is a power of two.
std::optional<uint64_t> ExactLog2(uint64_t v) {
  if (!std::has_single_bit(v)) return std::nullopt;
  return std::countr_zero(v);
}

// (a l' + 60) q^3 2^-n + 20 q^2 p, where l' is supplied exactly or as a
// float.
Bound ClosedForm(const BoundInput& in, const std::optional<Rational>& coefficient,
                 const BigFloat& coefficient_float, const Rational& p) {
  Rational q = Rational(cpp_int(in.q));
  Rational tail = 20 * q * q * p;
  Rational cubic = q * q * q * Pow2(-static_cast<int64_t>(in.n));
  Bound out;
  if (coefficient) {
    out.exact = (*coefficient + 60) * cubic + tail;
    out.value = ToBigFloat(*out.exact);
  } else {
    out.value = (coefficient_float + 60) * ToBigFloat(cubic) + ToBigFloat(tail);
  }
  return out;
}

BigFloat Unsimplified(const BoundInput& in, const BigFloat& kappa_term,
                      CommitmentVariant variant) {
  BigFloat capacity = CapacityBound(in, variant);
  return 2 * (kappa_term + 1) * ToBigFloat(Pow2(-static_cast<int64_t>(in.n))) +
         capacity * capacity;
}

}  // namespace

void ValidateBoundInput(const BoundInput& in) {
  if (in.ell == 0 || in.n == 0 || in.r == 0 || in.l0 == 0 || in.kappa == 0 ||
      in.challenge_count == 0) {
    throw InvalidChallenge("l, n, r, l0, kappa and |C| must be positive");
  }
  if (in.p_triv < 0 || in.p_triv > 1) throw InvalidChallenge("p_triv must lie in [0,1]");
}

BigFloat ToBigFloat(const Rational& v) {
  return BigFloat(numerator(v)) / BigFloat(denominator(v));
}

BigFloat Log2(const BigFloat& v) {
  if (v == 0) return -std::numeric_limits<BigFloat>::infinity();
  return log2(v);
}

BigFloat CapacityBound(const BoundInput& in, CommitmentVariant variant) {
  ValidateBoundInput(in);
  BigFloat q = BigFloat(in.q);
  int64_t shift = variant == CommitmentVariant::kMerkle ? 1 : 0;
  Rational load = Rational(cpp_int(in.q)) * Rational(cpp_int(in.ell)) *
                  Pow2(shift - static_cast<int64_t>(in.n));
  Rational inner = load > in.p_triv ? load : in.p_triv;
  BigFloat collision =
      2 * E() * pow(q, BigFloat(3) / 2) * sqrt(ToBigFloat(Pow2(-static_cast<int64_t>(in.n))));
  return collision + q * sqrt(10 * ToBigFloat(inner));
}

TwoFormBound EpsExOrdinary(const BoundInput& in) {
  ValidateBoundInput(in);
  TwoFormBound out;
  Rational coefficient = 22 * Rational(cpp_int(in.ell));
  out.simplified = ClosedForm(in, coefficient, 0, in.p_triv);
  out.unsimplified = Unsimplified(in, BigFloat(in.kappa), CommitmentVariant::kOrdinary);
  out.simplified_dominates = out.simplified.value >= out.unsimplified;
  return out;
}

TwoFormBound EpsExMerkle(const BoundInput& in) {
  ValidateBoundInput(in);
  TwoFormBound out;
  BigFloat log_ell = Log2(BigFloat(in.ell));
  std::optional<Rational> coefficient;
  if (auto exact = ExactLog2(in.ell)) {
    coefficient = 22 * Rational(cpp_int(in.ell)) * Rational(cpp_int(*exact));
  }
  out.simplified = ClosedForm(in, coefficient, 22 * BigFloat(in.ell) * log_ell, in.p_triv);
  out.unsimplified =
      Unsimplified(in, BigFloat(in.kappa) * log_ell, CommitmentVariant::kMerkle);
  out.simplified_dominates = out.simplified.value >= out.unsimplified;
  return out;
}

Bound EpsUnruh(const BoundInput& in) {
  ValidateBoundInput(in);
  Rational coefficient = 22 * Rational(cpp_int(in.r)) * Rational(cpp_int(in.l0));
  return ClosedForm(in, coefficient, 0, PowRational(in.p_triv, in.r));
}

Bound EpsMppu(const BoundInput& in) {
  ValidateBoundInput(in);
  uint64_t leaves = uint64_t{in.r} * in.l0;
  std::optional<Rational> coefficient;
  if (auto exact = ExactLog2(leaves)) {
    coefficient = 22 * Rational(cpp_int(leaves)) * Rational(cpp_int(*exact));
  }
  BigFloat coefficient_float = 22 * BigFloat(leaves) * Log2(BigFloat(leaves));
  return ClosedForm(in, coefficient, coefficient_float, PowRational(in.p_triv, in.r));
}

std::vector<Table1Row> Table1Compare(const Rational& eps, const BoundInput& in) {
  ValidateBoundInput(in);
  if (in.q == 0) throw InvalidChallenge("reduction table needs q >= 1");
  if (eps <= 0 || eps > 1) throw InvalidChallenge("eps must lie in (0,1]");
  const Rational q = Rational(cpp_int(in.q));
  const Rational two_n = Pow2(-static_cast<int64_t>(in.n));
  const Rational c_r =
      PowRational(Rational(cpp_int(1), cpp_int(in.challenge_count)), in.r);

  // r q 2^{-n/2} is irrational for odd n; it enters g with constant 1, so
  // rounding 2^{-n/2} up to 2^{-floor(n/2)} keeps g an upper estimate.
  Rational g = c_r + Rational(cpp_int(in.r)) * q * Pow2(-static_cast<int64_t>(in.n / 2)) +
               q * q * q * two_n;
  Rational h = (22 * Rational(cpp_int(in.ell)) + 60) * q * q * q * two_n +
               20 * q * q * c_r;

  std::vector<Table1Row> rows = {
      {"eps^3/q^6", PowRational(eps, 3) / PowRational(q, 6), true},
      {"eps/q^2", eps / (q * q), true},
      {"eps-g", eps - g, true},
      {"eps-h", eps - h, false},
  };
  const Rational collision_level = Pow2(-static_cast<int64_t>(in.n / 3));
  for (auto& row : rows) {
    row.vacuous = row.value <= 0 || row.value <= two_n;
    row.below_collision_level = row.value <= collision_level;
  }
  return rows;
}

Rational ParseProbability(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  }
  auto fail = [&]() -> Rational {
    throw ParseError("cannot parse probability: " + std::string(text));
  };
  if (s.empty()) return fail();

  auto parse_int = [&](std::string_view digits, bool allow_sign) -> cpp_int {
    bool negative = false;
    if (allow_sign && !digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
      negative = digits[0] == '-';
      digits.remove_prefix(1);
    }
    if (digits.empty() || digits.size() > 4000) fail();
    cpp_int v = 0;
    for (char ch : digits) {
      if (!std::isdigit(static_cast<unsigned char>(ch))) fail();
      v = v * 10 + (ch - '0');
    }
    return negative ? cpp_int(-v) : v;
  };

  if (s.starts_with("2^")) {
    std::string_view e = std::string_view(s).substr(2);
    if (e.starts_with("(") && e.ends_with(")")) e = e.substr(1, e.size() - 2);
    cpp_int exponent = parse_int(e, true);
    if (abs(exponent) > 1000000) fail();
    return Pow2(static_cast<int64_t>(exponent));
  }
  if (auto slash = s.find('/'); slash != std::string::npos) {
    cpp_int num = parse_int(std::string_view(s).substr(0, slash), false);
    cpp_int den = parse_int(std::string_view(s).substr(slash + 1), false);
    if (den == 0) fail();
    return Rational(num, den);
  }
  std::string_view mantissa = s;
  int64_t exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    cpp_int parsed = parse_int(std::string_view(s).substr(e + 1), true);
    if (abs(parsed) > 100000) fail();
    exponent = static_cast<int64_t>(parsed);
    mantissa = std::string_view(s).substr(0, e);
  }
  std::string digits;
  if (auto dot = mantissa.find('.'); dot != std::string::npos) {
    std::string_view frac = mantissa.substr(dot + 1);
    digits = std::string(mantissa.substr(0, dot)) + std::string(frac);
    exponent -= static_cast<int64_t>(frac.size());
    if (digits.empty()) fail();
  } else {
    digits = std::string(mantissa);
  }
  Rational value(parse_int(digits, false));
  cpp_int scale = boost::multiprecision::pow(cpp_int(10),
                                             static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  return exponent < 0 ? value / Rational(scale) : value * Rational(scale);
}

std::string FormatSci(const BigFloat& v, int digits) {
  std::ostringstream out;
  out << std::scientific << std::setprecision(digits - 1) << v;
  return out.str();
}

}  // namespace cnofs
