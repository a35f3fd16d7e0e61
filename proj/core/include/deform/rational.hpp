#ifndef DEFORM_RATIONAL_HPP
#define DEFORM_RATIONAL_HPP

#include <gmpxx.h>
#include <string>

namespace deform {

// Exact rational scalar. GMP keeps values canonical (gcd(num,den)=1, den>0)
// after every arithmetic operation; no floating point anywhere in the library.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational rat(long num, long den = 1)
{
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

inline std::string to_string(const Rational& q) { return q.get_str(); }

// Bit length of an integer, used for pivot selection in fraction-free
// elimination (smaller pivots keep intermediate entries small).
inline size_t bit_length(const Integer& z)
{
    if (sgn(z) == 0)
        return 0;
    return mpz_sizeinbase(z.get_mpz_t(), 2);
}

} // namespace deform

#endif
