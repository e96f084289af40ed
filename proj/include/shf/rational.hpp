#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace shf {

// Exact arithmetic: counts are arbitrary-precision integers, weights and
// partition functions exact rationals.
using Int = mpz_class;
using Rat = mpq_class;

// Height values are plain machine integers; everything at desk scale fits.
using Value = long long;

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rat make_rat(long num, long den = 1) {
  if (den == 0) throw ValidationError("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Parses "p", "p/q", or a plain decimal integer string.
inline Rat parse_rat(const std::string& s) {
  if (s.empty()) throw ValidationError("empty rational literal");
  try {
    Rat r(s);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ValidationError("malformed rational literal: '" + s + "'");
  }
}

// Canonical text form: "p" when the denominator is one, else "p/q".
inline std::string rat_to_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline std::string int_to_string(const Int& z) { return z.get_str(); }

// Largest integer <= t.
inline Int rat_floor(const Rat& t) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), t.get_num().get_mpz_t(), t.get_den().get_mpz_t());
  return q;
}

inline Value to_value(const Int& z) {
  if (!z.fits_slong_p()) throw ValidationError("integer out of Value range");
  return static_cast<Value>(z.get_si());
}

static_assert(sizeof(long) == sizeof(Value), "Value must fit a GMP slong");

inline Rat rat_of(Value v) { return Rat(static_cast<long>(v)); }
inline Int int_of(Value v) { return Int(static_cast<long>(v)); }

}  // namespace shf
