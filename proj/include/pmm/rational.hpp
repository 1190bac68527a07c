#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace pmm {

// Exact rational arithmetic carrier. mpq_class keeps values canonical
// (lowest terms, positive denominator) through all arithmetic.
using Rat = mpq_class;

// Parses "p", "-p/q", or a decimal string like "1.25" exactly. Throws ParseError.
Rat rat_from_string(const std::string& text);

// Canonical text form: "p" when the denominator is 1, else "p/q".
std::string rat_to_string(const Rat& v);

double rat_to_double(const Rat& v);

inline Rat rat_int(long v) { return Rat(v); }

// p/q as a fraction of two machine ints (q > 0 required).
inline Rat rat_frac(long p, long q) {
  Rat r(p, q);
  r.canonicalize();
  return r;
}

inline const Rat& rat_min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }

inline bool rat_is_int(const Rat& v) { return v.get_den() == 1; }
inline bool rat_is_half_int(const Rat& v) { return v.get_den() == 1 || v.get_den() == 2; }

// Optional-based representation of values in R ∪ {+inf}; nullopt means +inf.
using RatOrInf = std::optional<Rat>;

inline bool le_inf(const Rat& a, const RatOrInf& b) { return !b.has_value() || a <= *b; }
inline bool lt_inf(const Rat& a, const RatOrInf& b) { return !b.has_value() || a < *b; }
inline std::string rat_or_inf_to_string(const RatOrInf& v) {
  return v.has_value() ? rat_to_string(*v) : "inf";
}

}  // namespace pmm
