#ifndef OLAB_ALGEBRAIC_HPP
#define OLAB_ALGEBRAIC_HPP

#include <gmpxx.h>

#include <memory>
#include <mutex>
#include <utility>
#include <vector>

namespace olab {

using Rational = mpq_class;
using BigInt = mpz_class;

// Closed double interval with outward-rounded arithmetic. Used as a cheap
// numeric filter in front of exact rational computations: the true real value
// of any tracked quantity is always contained in its DInterval.
struct DInterval {
    double lo = 0.0;
    double hi = 0.0;

    static DInterval point(double v) { return {v, v}; }
    static DInterval widened(double v);

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }

    DInterval operator+(const DInterval& o) const;
    DInterval operator-(const DInterval& o) const;
    DInterval operator*(const DInterval& o) const;
    DInterval operator-() const { return {-hi, -lo}; }
};

// A real algebraic number given by an integer minimal polynomial together
// with a rational interval isolating exactly one real root. The interval is
// refinable; refinement is shared and cached, so repeated comparisons against
// the same parameter get cheaper over time.
//
// Irreducibility of the polynomial is an input contract. It is checked by a
// square-free test (gcd with the derivative) and a small-coefficient rational
// root test; full factorization is out of scope.
class AlgebraicParameter {
public:
    // coeffs is c0..cd, low to high, cd != 0, degree d >= 1.
    // For d == 1 the root is rational and the interval degenerates to a point.
    static std::shared_ptr<const AlgebraicParameter>
    create(std::vector<BigInt> coeffs, const Rational& lo, const Rational& hi);

    int degree() const { return degree_; }
    const std::vector<BigInt>& minimal_polynomial() const { return poly_; }
    bool is_rational() const { return degree_ == 1; }

    // Sign of the minimal polynomial at a rational point (exact).
    int sign_at(const Rational& x) const;

    // Snapshot of the current cached isolating interval.
    std::pair<Rational, Rational> enclosure() const;
    std::pair<Rational, Rational> original_interval() const
    { return {orig_lo_, orig_hi_}; }

    // One bisection step on the shared interval. Thread-safe.
    void refine() const;
    // Refine until hi - lo <= width, returning the refined interval.
    std::pair<Rational, Rational> refine_below(const Rational& width) const;

    // Outward-rounded double enclosure of the root (snapshot).
    DInterval double_enclosure() const;

    // x^degree reduced modulo the minimal polynomial, low to high, length d.
    const std::vector<Rational>& power_reduction() const { return xd_; }

private:
    AlgebraicParameter() = default;

    std::vector<BigInt> poly_;
    int degree_ = 0;
    Rational orig_lo_, orig_hi_;
    std::vector<Rational> xd_;

    mutable std::mutex mu_;
    mutable Rational lo_, hi_;
    mutable int sign_lo_ = 0;
    mutable DInterval denc_{0.0, 0.0};

    void update_double_enclosure_locked() const;
};

using ParamPtr = std::shared_ptr<const AlgebraicParameter>;

// A residue class in Q[x] modulo the minimal polynomial of an
// AlgebraicParameter, i.e. an exact element of Q(lambda). Canonical form:
// rational coefficients c0..c_{d-1}; two elements are equal iff their
// coefficient vectors are equal. Every element also carries a double
// enclosure of its real value, maintained through arithmetic, so that order
// comparisons rarely need exact interval refinement.
//
// Immutable after construction; safe to share across threads.
class RingElement {
public:
    RingElement() = default; // empty; usable only as assignment target

    static RingElement from_rational(const ParamPtr& p, const Rational& v);
    static RingElement from_int(const ParamPtr& p, long v);
    // The class of x itself (the parameter lambda).
    static RingElement generator(const ParamPtr& p);
    // Coefficients low to high; longer vectors are reduced mod the minpoly.
    static RingElement from_coefficients(const ParamPtr& p, std::vector<Rational> coeffs);

    const ParamPtr& parameter() const { return param_; }
    const std::vector<Rational>& coefficients() const { return c_; }
    const DInterval& box() const { return box_; }
    bool valid() const { return static_cast<bool>(param_); }

    bool is_zero() const;
    bool is_rational() const; // degree-0 residue
    Rational rational_value() const;

    RingElement operator-() const;
    friend RingElement operator+(const RingElement& a, const RingElement& b);
    friend RingElement operator-(const RingElement& a, const RingElement& b);
    friend RingElement operator*(const RingElement& a, const RingElement& b);
    friend RingElement operator/(const RingElement& a, const RingElement& b);

    // Multiplicative inverse via the extended Euclidean algorithm in Q[x].
    // Throws ContractError on zero.
    RingElement inverse() const;

    // Exact three-way comparison of real values: -1, 0, +1.
    // Equality is decided from canonical form with no tolerance; strict order
    // falls back to refining the parameter's isolating interval when the
    // double enclosures overlap.
    int compare(const RingElement& o) const;

    bool operator==(const RingElement& o) const;
    bool operator!=(const RingElement& o) const { return !(*this == o); }

    // A double within abs_tol of the true value; deterministic for a fixed
    // construction path and tolerance (never consults the shared refinement
    // cache).
    double to_float(double abs_tol) const;

    // In-place forms for hot loops (reuse dst's storage).
    static void add_into(RingElement& dst, const RingElement& a, const RingElement& b);
    static void sub_into(RingElement& dst, const RingElement& a, const RingElement& b);

private:
    ParamPtr param_;
    std::vector<Rational> c_;
    DInterval box_{0.0, 0.0};

    void recompute_box();
    static void check_same_parameter(const RingElement& a, const RingElement& b);
};

inline int cmp(const RingElement& a, const RingElement& b) { return a.compare(b); }
inline double approx(const RingElement& a) { return a.to_float(1e-15); }
inline RingElement zero_like(const RingElement& s)
{ return RingElement::from_int(s.parameter(), 0); }
inline RingElement one_like(const RingElement& s)
{ return RingElement::from_int(s.parameter(), 1); }

// Exact interval evaluation of a rational-coefficient polynomial over a
// rational interval (Horner with interval multiplication).
std::pair<Rational, Rational>
rational_interval_eval(const std::vector<Rational>& coeffs,
                       const Rational& lo, const Rational& hi);

} // namespace olab

#endif
