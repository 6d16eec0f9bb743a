#pragma once

#include <cmath>

// Scalar math dispatch for the templated geometry core. Unqualified calls
// into hyphc::num resolve for the builtin floating types via the using
// declarations below and for __float128 via the quadmath overloads.

#if defined(__SIZEOF_FLOAT128__) && defined(HYPHC_HAVE_QUADMATH)
#include <quadmath.h>
#define HYPHC_FLOAT128 1
#endif

namespace hyphc::num {

using std::abs;
using std::acosh;
using std::asinh;
using std::atan;
using std::atan2;
using std::atanh;
using std::cos;
using std::cosh;
using std::exp;
using std::hypot;
using std::isfinite;
using std::log;
using std::log1p;
using std::sin;
using std::sinh;
using std::sqrt;
using std::tanh;

#ifdef HYPHC_FLOAT128
// libstdc++ already ships std::abs for __float128; the rest comes from quadmath.
inline __float128 acosh(__float128 x) { return acoshq(x); }
inline __float128 asinh(__float128 x) { return asinhq(x); }
inline __float128 atan(__float128 x) { return atanq(x); }
inline __float128 atan2(__float128 y, __float128 x) { return atan2q(y, x); }
inline __float128 atanh(__float128 x) { return atanhq(x); }
inline __float128 cos(__float128 x) { return cosq(x); }
inline __float128 cosh(__float128 x) { return coshq(x); }
inline __float128 exp(__float128 x) { return expq(x); }
inline __float128 hypot(__float128 x, __float128 y) { return hypotq(x, y); }
inline bool isfinite(__float128 x) { return finiteq(x) != 0; }
inline __float128 log(__float128 x) { return logq(x); }
inline __float128 log1p(__float128 x) { return log1pq(x); }
inline __float128 sin(__float128 x) { return sinq(x); }
inline __float128 sinh(__float128 x) { return sinhq(x); }
inline __float128 sqrt(__float128 x) { return sqrtq(x); }
inline __float128 tanh(__float128 x) { return tanhq(x); }
#endif

}  // namespace hyphc::num
