#ifndef OLAB_SCALARS_HPP
#define OLAB_SCALARS_HPP

#include "olab/algebraic.hpp"

#include <cmath>

namespace olab {

// Scalar for float-only mode: a plain double plus the collision tolerance
// under which two values are considered equal. Coincidence detection in this
// mode is necessarily cruder than exact mode; the tolerance travels with the
// values so generic code needs no extra context.
struct FloatScalar {
    double v = 0.0;
    double collision_eps = 0.0;

    FloatScalar() = default;
    FloatScalar(double value, double eps) : v(value), collision_eps(eps) {}

    FloatScalar operator+(const FloatScalar& o) const
    { return {v + o.v, std::max(collision_eps, o.collision_eps)}; }
    FloatScalar operator-(const FloatScalar& o) const
    { return {v - o.v, std::max(collision_eps, o.collision_eps)}; }
    FloatScalar operator*(const FloatScalar& o) const
    { return {v * o.v, std::max(collision_eps, o.collision_eps)}; }
    FloatScalar operator/(const FloatScalar& o) const
    { return {v / o.v, std::max(collision_eps, o.collision_eps)}; }
    FloatScalar operator-() const { return {-v, collision_eps}; }

    int compare(const FloatScalar& o) const
    {
        double d = v - o.v;
        if (std::abs(d) <= std::max(collision_eps, o.collision_eps)) return 0;
        return d < 0 ? -1 : 1;
    }
    bool operator==(const FloatScalar& o) const { return compare(o) == 0; }

    double to_float(double) const { return v; }
};

inline int cmp(const FloatScalar& a, const FloatScalar& b) { return a.compare(b); }
inline double approx(const FloatScalar& a) { return a.v; }
inline FloatScalar zero_like(const FloatScalar& s) { return {0.0, s.collision_eps}; }
inline FloatScalar one_like(const FloatScalar& s) { return {1.0, s.collision_eps}; }

inline void assign_add(FloatScalar& dst, const FloatScalar& a, const FloatScalar& b)
{ dst = a + b; }
inline void assign_add(RingElement& dst, const RingElement& a, const RingElement& b)
{ RingElement::add_into(dst, a, b); }
inline void assign_sub(FloatScalar& dst, const FloatScalar& a, const FloatScalar& b)
{ dst = a - b; }
inline void assign_sub(RingElement& dst, const RingElement& a, const RingElement& b)
{ RingElement::sub_into(dst, a, b); }

// Closed interval over a scalar type. Endpoint containment counts.
template <class S>
struct Interval {
    S lo, hi;

    S length() const { return hi - lo; }

    bool contains(const Interval& inner) const
    { return cmp(lo, inner.lo) <= 0 && cmp(inner.hi, hi) <= 0; }

    bool contains_point(const S& x) const
    { return cmp(lo, x) <= 0 && cmp(x, hi) <= 0; }

    // Strict separation; touching endpoints means NOT disjoint.
    bool disjoint_from(const Interval& o) const
    { return cmp(hi, o.lo) < 0 || cmp(o.hi, lo) < 0; }

    bool intersects(const Interval& o) const { return !disjoint_from(o); }
};

} // namespace olab

#endif
