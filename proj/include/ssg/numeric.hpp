#pragma once

// Exact arithmetic used throughout the library.
//
// Every finite-horizon probability in a game whose only randomness is a fair
// binary coin is a dyadic rational m/2^e, so values are carried as Dyadic.
// General rationals only appear in infinite-horizon reachability, and the
// interval type sandwiches transcendental constants (powers of e) between two
// rationals so that no comparison ever goes through floating point.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace ssg {

using BigInt = mpz_class;
using Rational = mpq_class;

inline std::string to_string(const BigInt& v) { return v.get_str(); }

/// Renders as "p/q", including q = 1.
inline std::string to_string(Rational q) {
  q.canonicalize();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational parse_rational(std::string_view text) {
  Rational q;
  if (text.empty() || q.set_str(std::string(text), 10) != 0 || q.get_den() == 0)
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

/// m / 2^e in canonical form (e == 0 or m odd).
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long value) : mantissa_(value) {}  // NOLINT: implicit on purpose
  Dyadic(BigInt mantissa, std::uint64_t exponent)
      : mantissa_(std::move(mantissa)), exponent_(exponent) {
    normalize();
  }

  static Dyadic zero() { return {}; }
  static Dyadic one() { return Dyadic(1); }
  /// 2^-k
  static Dyadic pow2_neg(std::uint64_t k) { return Dyadic(BigInt(1), k); }
  /// 1 - 2^-k
  static Dyadic one_minus_pow2_neg(std::uint64_t k) {
    BigInt m = 1;
    m <<= k;
    return Dyadic(m - 1, k);
  }

  const BigInt& mantissa() const { return mantissa_; }
  std::uint64_t exponent() const { return exponent_; }
  bool is_zero() const { return mantissa_ == 0; }

  Rational to_rational() const {
    BigInt den = 1;
    den <<= exponent_;
    Rational q(mantissa_, den);
    q.canonicalize();
    return q;
  }

  std::string to_string() const {
    return mantissa_.get_str() + "/2^" + std::to_string(exponent_);
  }

  /// Fixed-point rendering rounded half-up to `digits` decimals; display only.
  std::string to_decimal(unsigned digits) const {
    BigInt scale = 1;
    for (unsigned d = 0; d < digits; ++d) scale *= 10;
    BigInt num = abs(mantissa_) * scale * 2;
    BigInt den = 1;
    den <<= exponent_;
    BigInt r = (num + den) / (den * 2);
    std::string s = r.get_str();
    if (digits > 0) {
      if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
      s.insert(s.size() - digits, ".");
    }
    return (mantissa_ < 0 ? "-" : "") + s;
  }

  /// Accepts "m/2^e", a plain integer, or "p/q" with q a power of two.
  static Dyadic parse(std::string_view text) {
    const auto bad = [&] {
      return std::invalid_argument("malformed dyadic '" + std::string(text) + "'");
    };
    if (auto caret = text.find("/2^"); caret != std::string_view::npos) {
      BigInt m;
      if (m.set_str(std::string(text.substr(0, caret)), 10) != 0) throw bad();
      std::string e(text.substr(caret + 3));
      if (e.empty() || e.find_first_not_of("0123456789") != std::string::npos) throw bad();
      return Dyadic(m, std::stoull(e));
    }
    Rational q;
    try {
      q = parse_rational(text);
    } catch (const std::invalid_argument&) {
      throw bad();
    }
    const BigInt& den = q.get_den();
    const auto bits = mpz_sizeinbase(den.get_mpz_t(), 2) - 1;
    if (mpz_popcount(den.get_mpz_t()) != 1) throw bad();
    return Dyadic(q.get_num(), bits);
  }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    auto [x, y, e] = align(a, b);
    return Dyadic(x + y, e);
  }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) {
    auto [x, y, e] = align(a, b);
    return Dyadic(x - y, e);
  }
  friend Dyadic operator-(const Dyadic& a) {
    Dyadic r = a;
    r.mantissa_ = -r.mantissa_;
    return r;
  }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
  }
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }

  /// x / 2
  Dyadic half() const {
    if (is_zero()) return *this;
    return Dyadic(mantissa_, exponent_ + 1);
  }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exponent_ == b.exponent_ && a.mantissa_ == b.mantissa_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    auto [x, y, e] = align(a, b);
    const int c = cmp(x, y);
    return c < 0 ? std::strong_ordering::less
                 : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

 private:
  static std::tuple<BigInt, BigInt, std::uint64_t> align(const Dyadic& a, const Dyadic& b) {
    const std::uint64_t e = std::max(a.exponent_, b.exponent_);
    BigInt x = a.mantissa_;
    BigInt y = b.mantissa_;
    x <<= (e - a.exponent_);
    y <<= (e - b.exponent_);
    return {std::move(x), std::move(y), e};
  }

  void normalize() {
    if (mantissa_ == 0) {
      exponent_ = 0;
      return;
    }
    const auto tz = static_cast<std::uint64_t>(mpz_scan1(mantissa_.get_mpz_t(), 0));
    const auto shift = std::min(tz, exponent_);
    if (shift > 0) {
      mantissa_ >>= shift;
      exponent_ -= shift;
    }
  }

  BigInt mantissa_ = 0;
  std::uint64_t exponent_ = 0;
};

/// (a + b) / 2, the value of a fair coin between two successors.
inline Dyadic dy_avg(const Dyadic& a, const Dyadic& b) { return (a + b).half(); }

inline Dyadic pow(const Dyadic& base, unsigned long k) {
  BigInt m;
  mpz_pow_ui(m.get_mpz_t(), base.mantissa().get_mpz_t(), k);
  return Dyadic(m, base.exponent() * k);
}

inline std::string to_string(const Dyadic& d) { return d.to_string(); }

inline bool operator==(const Dyadic& d, const Rational& q) { return d.to_rational() == q; }

// ---------------------------------------------------------------------------
// Fibonacci i-step numbers and run-of-tails probabilities.

/// F^(i)_c for c = 0, 1, 2, ..., memoized up to the largest index requested.
/// F_c = 0 for c <= 0, F_1 = F_2 = 1, F_c = sum of the previous i terms.
/// Not thread-safe; give each thread its own table.
class FibTable {
 public:
  explicit FibTable(unsigned i) : i_(i) {
    if (i == 0) throw std::invalid_argument("Fibonacci i-step numbers need i >= 1");
    values_.emplace_back(0);
    values_.emplace_back(1);
  }

  unsigned order() const { return i_; }

  const BigInt& at(long c) {
    static const BigInt zero = 0;
    if (c <= 0) return zero;
    extend(static_cast<std::size_t>(c));
    return values_[static_cast<std::size_t>(c)];
  }

 private:
  void extend(std::size_t c) {
    while (values_.size() <= c) {
      const std::size_t n = values_.size();
      if (n == 2) {
        values_.emplace_back(1);
        continue;
      }
      // Window sum: add the newest term, drop the one falling out of the window.
      BigInt next = values_[n - 1] * 2;
      if (n >= static_cast<std::size_t>(i_) + 1) next -= values_[n - 1 - i_];
      values_.push_back(std::move(next));
    }
  }

  unsigned i_;
  std::deque<BigInt> values_;  // references stay valid while the table grows
};

inline BigInt fib_istep(unsigned i, long c) {
  FibTable table(i);
  return table.at(c);
}

/// p^t and q^t for runs of i tails; p^t = 1 - F^(i)_{t+2} / 2^t.
class TailProbabilities {
 public:
  explicit TailProbabilities(unsigned i) : fib_(i) {}

  unsigned order() const { return fib_.order(); }

  /// Probability that t fair tosses contain i consecutive tails.
  Dyadic p(std::uint64_t t) {
    BigInt pow = 1;
    pow <<= t;
    return Dyadic(pow - fib_.at(static_cast<long>(t) + 2), t);
  }

  /// Probability that the first run of i tails completes at exactly toss t.
  Dyadic q(std::uint64_t t) {
    const unsigned i = order();
    if (t < i) throw std::invalid_argument("q_t needs t >= i");
    if (t == i) return Dyadic::pow2_neg(i);
    Dyadic closed = Dyadic::pow2_neg(i + 1) * (Dyadic::one() - p(t - 1 - i));
    Dyadic difference = p(t) - p(t - 1);
    if (closed != difference)
      throw std::logic_error("q_t closed form disagrees with p_t difference at t=" +
                             std::to_string(t));
    return closed;
  }

  FibTable& fib() { return fib_; }

 private:
  FibTable fib_;
};

inline Dyadic p_t(unsigned i, std::uint64_t t) { return TailProbabilities(i).p(t); }
inline Dyadic q_t(unsigned i, std::uint64_t t) { return TailProbabilities(i).q(t); }

/// Smallest k with p^{k-1} >= 1/2. Streams the recurrence, so memory stays at
/// i + 1 big integers regardless of how large k gets.
inline std::uint64_t k_threshold(unsigned i) {
  if (i == 0) throw std::invalid_argument("k_threshold needs i >= 1");
  // window holds F_{c-i-1} .. F_{c-1}
  std::vector<BigInt> window(i + 1, BigInt(0));
  std::size_t head = 0;  // index of the oldest entry
  auto push = [&](BigInt v) {
    window[head] = std::move(v);
    head = (head + 1) % window.size();
  };
  auto newest = [&]() -> const BigInt& {
    return window[(head + window.size() - 1) % window.size()];
  };
  push(BigInt(1));  // F_1
  push(BigInt(1));  // F_2
  long c = 2;
  BigInt pow = 1;  // 2^t with t = c - 2
  for (std::uint64_t t = 0;; ++t) {
    // invariant: newest() == F_{t+2}
    if (newest() * 2 <= pow) return t + 1;
    ++c;
    BigInt next = newest() * 2 - window[head];  // window[head] == F_{c-1-i}
    push(std::move(next));
    pow <<= 1;
  }
}

// ---------------------------------------------------------------------------
// Rational enclosures of e^x.

struct IntervalEnclosure {
  Rational lower;
  Rational upper;

  Rational width() const { return upper - lower; }
  bool contains(const Rational& q) const { return lower <= q && q <= upper; }

  /// a * this + b
  IntervalEnclosure affine(const Rational& a, const Rational& b) const {
    Rational lo = a * lower + b;
    Rational hi = a * upper + b;
    if (hi < lo) std::swap(lo, hi);
    return {lo, hi};
  }
};

/// Outcome of comparing an exact value against an enclosed constant.
enum class Certainty { proven, refuted, unknown };

inline const char* to_string(Certainty c) {
  switch (c) {
    case Certainty::proven: return "proven";
    case Certainty::refuted: return "refuted";
    case Certainty::unknown: return "unknown";
  }
  return "?";
}

/// Is q <= the enclosed constant?
inline Certainty certify_le(const Rational& q, const IntervalEnclosure& e) {
  if (q <= e.lower) return Certainty::proven;
  if (q > e.upper) return Certainty::refuted;
  return Certainty::unknown;
}

/// Is q >= the enclosed constant?
inline Certainty certify_ge(const Rational& q, const IntervalEnclosure& e) {
  if (q >= e.upper) return Certainty::proven;
  if (q < e.lower) return Certainty::refuted;
  return Certainty::unknown;
}

/// [lo, hi] containing e^x with hi - lo <= width, for |x| <= 1.
/// Partial sums S_n of the Taylor series with |e^x - S_n| <= 3|x|^{n+1}/(n+1)!.
inline IntervalEnclosure exp_enclosure(const Rational& x, const Rational& width) {
  if (abs(x) > 1) throw std::invalid_argument("exp_enclosure needs |x| <= 1");
  if (width <= 0) throw std::invalid_argument("exp_enclosure needs width > 0");
  if (x == 0) return {Rational(1), Rational(1)};
  Rational sum = 1;
  Rational term = 1;  // x^n / n!
  const Rational ax = abs(x);
  Rational abs_term = 1;
  for (unsigned long n = 0;; ++n) {
    // remainder after S_n
    Rational remainder = abs_term * ax / static_cast<unsigned long>(n + 1) * 3;
    if (remainder * 2 <= width) return {sum - remainder, sum + remainder};
    term = term * x / static_cast<unsigned long>(n + 1);
    abs_term = abs_term * ax / static_cast<unsigned long>(n + 1);
    sum += term;
  }
}

}  // namespace ssg
