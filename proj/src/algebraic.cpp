#include "olab/algebraic.hpp"
#include "olab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace olab {

namespace {

double next_down(double x)
{ return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
double next_up(double x)
{ return std::nextafter(x, std::numeric_limits<double>::infinity()); }

DInterval dinterval_of(const Rational& v)
{
    double d = mpq_get_d(v.get_mpq_t());
    if (Rational(d) == v)
        return DInterval::point(d);
    return {next_down(d), next_up(d)};
}

// --- small polynomial toolkit over Rational, low-to-high coefficients ---

using Poly = std::vector<Rational>;

int poly_degree(const Poly& p)
{
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (p[static_cast<size_t>(i)] != 0) return i;
    return -1;
}

void poly_trim(Poly& p)
{
    int d = poly_degree(p);
    p.resize(static_cast<size_t>(d + 1));
}

Poly poly_derivative(const Poly& p)
{
    Poly r;
    for (size_t i = 1; i < p.size(); ++i)
        r.push_back(p[i] * static_cast<long>(i));
    poly_trim(r);
    return r;
}

// p mod q (and optionally the quotient), classic long division.
Poly poly_rem(Poly p, const Poly& q, Poly* quotient = nullptr)
{
    poly_trim(p);
    int dq = poly_degree(q);
    if (dq < 0) throw ContractError("polynomial division by zero");
    if (quotient) quotient->assign(p.size(), Rational(0));
    const Rational& lead = q[static_cast<size_t>(dq)];
    while (poly_degree(p) >= dq) {
        int dp = poly_degree(p);
        Rational f = p[static_cast<size_t>(dp)] / lead;
        int shift = dp - dq;
        if (quotient) (*quotient)[static_cast<size_t>(shift)] = f;
        for (int i = 0; i <= dq; ++i)
            p[static_cast<size_t>(i + shift)] -= f * q[static_cast<size_t>(i)];
        p[static_cast<size_t>(dp)] = 0;
    }
    poly_trim(p);
    if (quotient) poly_trim(*quotient);
    return p;
}

Poly poly_gcd(Poly a, Poly b)
{
    poly_trim(a);
    poly_trim(b);
    while (poly_degree(b) >= 0) {
        Poly r = poly_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

int sign_of(const Rational& v) { return sgn(v); }

// Sturm sequence sign-variation count at a point.
int sturm_variations(const std::vector<Poly>& chain, const Rational& x)
{
    int vars = 0, prev = 0;
    for (const Poly& p : chain) {
        Rational acc = 0;
        for (int i = poly_degree(p); i >= 0; --i)
            acc = acc * x + p[static_cast<size_t>(i)];
        int s = sign_of(acc);
        if (s != 0) {
            if (prev != 0 && s != prev) ++vars;
            prev = s;
        }
    }
    return vars;
}

// Enumerate positive divisors by trial division; empty when |n| is too large
// for the best-effort rational-root check.
std::vector<BigInt> small_divisors(const BigInt& n)
{
    BigInt a = abs(n);
    std::vector<BigInt> out;
    if (a == 0 || a > 1000000000L) return out;
    unsigned long v = a.get_ui();
    for (unsigned long i = 1; i * i <= v; ++i) {
        if (v % i == 0) {
            out.emplace_back(i);
            if (i != v / i) out.emplace_back(v / i);
        }
    }
    return out;
}

} // namespace

DInterval DInterval::widened(double v) { return {next_down(v), next_up(v)}; }

DInterval DInterval::operator+(const DInterval& o) const
{ return {next_down(lo + o.lo), next_up(hi + o.hi)}; }

DInterval DInterval::operator-(const DInterval& o) const
{ return {next_down(lo - o.hi), next_up(hi - o.lo)}; }

DInterval DInterval::operator*(const DInterval& o) const
{
    double a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    return {next_down(std::min(std::min(a, b), std::min(c, d))),
            next_up(std::max(std::max(a, b), std::max(c, d)))};
}

std::pair<Rational, Rational>
rational_interval_eval(const std::vector<Rational>& coeffs,
                       const Rational& lo, const Rational& hi)
{
    if (coeffs.empty()) return {Rational(0), Rational(0)};
    Rational alo = coeffs.back(), ahi = coeffs.back();
    for (int i = static_cast<int>(coeffs.size()) - 2; i >= 0; --i) {
        Rational p1 = alo * lo, p2 = alo * hi, p3 = ahi * lo, p4 = ahi * hi;
        alo = std::min(std::min(p1, p2), std::min(p3, p4));
        ahi = std::max(std::max(p1, p2), std::max(p3, p4));
        alo += coeffs[static_cast<size_t>(i)];
        ahi += coeffs[static_cast<size_t>(i)];
    }
    return {alo, ahi};
}

// ---------------------------------------------------------------------------
// AlgebraicParameter

std::shared_ptr<const AlgebraicParameter>
AlgebraicParameter::create(std::vector<BigInt> coeffs, const Rational& lo, const Rational& hi)
{
    if (coeffs.size() < 2)
        throw ContractError("minimal polynomial must have degree >= 1");
    if (coeffs.back() == 0)
        throw ContractError("minimal polynomial has zero leading coefficient");

    const int d = static_cast<int>(coeffs.size()) - 1;

    Poly p(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) p[i] = Rational(coeffs[i]);

    // Square-free check: gcd(P, P') must be constant.
    Poly g = poly_gcd(p, poly_derivative(p));
    if (poly_degree(g) > 0)
        throw ContractError("minimal polynomial is not square-free (reducible)");

    // Best-effort rational-root test for d >= 2.
    if (d >= 2) {
        if (coeffs[0] == 0)
            throw ContractError("minimal polynomial has rational root 0 (reducible)");
        auto ps = small_divisors(coeffs[0]);
        auto qs = small_divisors(coeffs.back());
        Poly dummy;
        AlgebraicParameter probe;
        probe.poly_ = coeffs;
        probe.degree_ = d;
        for (const BigInt& pn : ps)
            for (const BigInt& qn : qs) {
                Rational r(pn, qn);
                r.canonicalize();
                if (probe.sign_at(r) == 0 || probe.sign_at(-r) == 0)
                    throw ContractError("minimal polynomial has a rational root (reducible)");
            }
    }

    auto param = std::shared_ptr<AlgebraicParameter>(new AlgebraicParameter());
    param->poly_ = std::move(coeffs);
    param->degree_ = d;

    if (d == 1) {
        Rational root(-param->poly_[0], param->poly_[1]);
        root.canonicalize();
        if (lo != hi && !(lo <= root && root <= hi))
            throw ContractError("isolating interval does not contain the rational root");
        param->orig_lo_ = param->orig_hi_ = root;
        param->lo_ = param->hi_ = root;
        param->sign_lo_ = 0;
    } else {
        if (!(lo < hi))
            throw ContractError("isolating interval must have positive width");
        int slo = param->sign_at(lo), shi = param->sign_at(hi);
        if (slo == 0 || shi == 0)
            throw ContractError("isolating interval endpoint is a root");
        if (slo == shi)
            throw ContractError("minimal polynomial does not change sign over the interval");

        // Exactly one root in (lo, hi), via a Sturm chain.
        std::vector<Poly> chain;
        chain.push_back(p);
        chain.push_back(poly_derivative(p));
        while (poly_degree(chain.back()) > 0) {
            Poly r = poly_rem(chain[chain.size() - 2], chain.back());
            if (poly_degree(r) < 0) break;
            for (Rational& c : r) c = -c;
            chain.push_back(std::move(r));
        }
        int nroots = sturm_variations(chain, lo) - sturm_variations(chain, hi);
        if (nroots != 1)
            throw ContractError("isolating interval contains " + std::to_string(nroots) +
                                " roots, expected exactly 1");

        param->orig_lo_ = lo;
        param->orig_hi_ = hi;
        param->lo_ = lo;
        param->hi_ = hi;
        param->sign_lo_ = slo;
    }

    // Reduction row: x^d = -(c_0 + ... + c_{d-1} x^{d-1}) / c_d.
    param->xd_.resize(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        Rational v(-param->poly_[static_cast<size_t>(i)], param->poly_[static_cast<size_t>(d)]);
        v.canonicalize();
        param->xd_[static_cast<size_t>(i)] = v;
    }

    {
        std::lock_guard<std::mutex> g2(param->mu_);
        param->update_double_enclosure_locked();
    }
    // Pre-refine so that freshly built element enclosures are tight.
    Rational w(1);
    w >>= 80; // 2^-80
    param->refine_below(w);
    return param;
}

int AlgebraicParameter::sign_at(const Rational& x) const
{
    const BigInt& num = x.get_num();
    const BigInt& den = x.get_den();
    // sum c_i num^i den^(d-i); den > 0 so the sign matches P(x).
    BigInt acc = 0, np = 1;
    std::vector<BigInt> dp(static_cast<size_t>(degree_) + 1);
    dp[static_cast<size_t>(degree_)] = 1;
    for (int i = degree_ - 1; i >= 0; --i)
        dp[static_cast<size_t>(i)] = dp[static_cast<size_t>(i + 1)] * den;
    for (int i = 0; i <= degree_; ++i) {
        acc += poly_[static_cast<size_t>(i)] * np * dp[static_cast<size_t>(i)];
        np *= num;
    }
    return sgn(acc);
}

std::pair<Rational, Rational> AlgebraicParameter::enclosure() const
{
    std::lock_guard<std::mutex> g(mu_);
    return {lo_, hi_};
}

void AlgebraicParameter::refine() const
{
    std::lock_guard<std::mutex> g(mu_);
    if (lo_ == hi_) return;
    Rational mid = (lo_ + hi_) / 2;
    int s = sign_at(mid);
    if (s == 0) {
        lo_ = mid;
        hi_ = mid;
    } else if (s == sign_lo_) {
        lo_ = mid;
    } else {
        hi_ = mid;
    }
    update_double_enclosure_locked();
}

std::pair<Rational, Rational> AlgebraicParameter::refine_below(const Rational& width) const
{
    std::lock_guard<std::mutex> g(mu_);
    while (hi_ - lo_ > width) {
        Rational mid = (lo_ + hi_) / 2;
        int s = sign_at(mid);
        if (s == 0) {
            lo_ = mid;
            hi_ = mid;
            break;
        }
        if (s == sign_lo_) lo_ = mid; else hi_ = mid;
    }
    update_double_enclosure_locked();
    return {lo_, hi_};
}

DInterval AlgebraicParameter::double_enclosure() const
{
    std::lock_guard<std::mutex> g(mu_);
    return denc_;
}

void AlgebraicParameter::update_double_enclosure_locked() const
{
    denc_.lo = next_down(mpq_get_d(lo_.get_mpq_t()));
    denc_.hi = next_up(mpq_get_d(hi_.get_mpq_t()));
}

// ---------------------------------------------------------------------------
// RingElement

RingElement RingElement::from_rational(const ParamPtr& p, const Rational& v)
{
    RingElement e;
    e.param_ = p;
    e.c_.assign(static_cast<size_t>(p->degree()), Rational(0));
    e.c_[0] = v;
    e.box_ = dinterval_of(v);
    return e;
}

RingElement RingElement::from_int(const ParamPtr& p, long v)
{
    return from_rational(p, Rational(v));
}

RingElement RingElement::generator(const ParamPtr& p)
{
    if (p->degree() == 1) {
        Rational root(-p->minimal_polynomial()[0], p->minimal_polynomial()[1]);
        root.canonicalize();
        return from_rational(p, root);
    }
    RingElement e;
    e.param_ = p;
    e.c_.assign(static_cast<size_t>(p->degree()), Rational(0));
    e.c_[1] = 1;
    e.box_ = p->double_enclosure();
    return e;
}

RingElement RingElement::from_coefficients(const ParamPtr& p, std::vector<Rational> coeffs)
{
    const size_t d = static_cast<size_t>(p->degree());
    RingElement e;
    e.param_ = p;
    if (coeffs.size() > d) {
        const std::vector<Rational>& xd = p->power_reduction();
        for (size_t i = coeffs.size(); i-- > d;) {
            if (coeffs[i] != 0) {
                Rational t = std::move(coeffs[i]);
                coeffs[i] = 0;
                for (size_t j = 0; j < d; ++j)
                    coeffs[i - d + j] += t * xd[j];
            }
        }
        coeffs.resize(d);
    } else {
        coeffs.resize(d, Rational(0));
    }
    e.c_ = std::move(coeffs);
    e.recompute_box();
    return e;
}

bool RingElement::is_zero() const
{
    for (const Rational& c : c_)
        if (c != 0) return false;
    return true;
}

bool RingElement::is_rational() const
{
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

Rational RingElement::rational_value() const
{
    if (!is_rational())
        throw ContractError("ring element is not a rational constant");
    return c_[0];
}

void RingElement::check_same_parameter(const RingElement& a, const RingElement& b)
{
    if (a.param_.get() != b.param_.get())
        throw ContractError("ring elements belong to different algebraic parameters");
}

RingElement RingElement::operator-() const
{
    RingElement e;
    e.param_ = param_;
    e.c_.resize(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) e.c_[i] = -c_[i];
    e.box_ = -box_;
    return e;
}

RingElement operator+(const RingElement& a, const RingElement& b)
{
    RingElement e;
    RingElement::add_into(e, a, b);
    return e;
}

RingElement operator-(const RingElement& a, const RingElement& b)
{
    RingElement e;
    RingElement::sub_into(e, a, b);
    return e;
}

void RingElement::add_into(RingElement& dst, const RingElement& a, const RingElement& b)
{
    check_same_parameter(a, b);
    if (&dst == &a || &dst == &b) {
        RingElement t;
        add_into(t, a, b);
        dst = std::move(t);
        return;
    }
    dst.param_ = a.param_;
    dst.c_.resize(a.c_.size());
    for (size_t i = 0; i < a.c_.size(); ++i)
        dst.c_[i] = a.c_[i] + b.c_[i];
    dst.box_ = a.box_ + b.box_;
}

void RingElement::sub_into(RingElement& dst, const RingElement& a, const RingElement& b)
{
    check_same_parameter(a, b);
    if (&dst == &a || &dst == &b) {
        RingElement t;
        sub_into(t, a, b);
        dst = std::move(t);
        return;
    }
    dst.param_ = a.param_;
    dst.c_.resize(a.c_.size());
    for (size_t i = 0; i < a.c_.size(); ++i)
        dst.c_[i] = a.c_[i] - b.c_[i];
    dst.box_ = a.box_ - b.box_;
}

RingElement operator*(const RingElement& a, const RingElement& b)
{
    RingElement::check_same_parameter(a, b);
    const size_t d = a.c_.size();
    RingElement e;
    e.param_ = a.param_;
    if (d == 1) {
        e.c_.resize(1);
        e.c_[0] = a.c_[0] * b.c_[0];
        e.box_ = a.box_ * b.box_;
        return e;
    }
    std::vector<Rational> prod(2 * d - 1, Rational(0));
    for (size_t i = 0; i < d; ++i) {
        if (a.c_[i] == 0) continue;
        for (size_t j = 0; j < d; ++j) {
            if (b.c_[j] == 0) continue;
            prod[i + j] += a.c_[i] * b.c_[j];
        }
    }
    const std::vector<Rational>& xd = a.param_->power_reduction();
    for (size_t i = prod.size(); i-- > d;) {
        if (prod[i] != 0) {
            Rational t = std::move(prod[i]);
            prod[i] = 0;
            for (size_t j = 0; j < d; ++j)
                prod[i - d + j] += t * xd[j];
        }
    }
    prod.resize(d);
    e.c_ = std::move(prod);
    e.box_ = a.box_ * b.box_;
    return e;
}

RingElement RingElement::inverse() const
{
    if (is_zero())
        throw ContractError("inverse of zero ring element");
    if (is_rational()) {
        Rational inv = 1 / c_[0];
        return from_rational(param_, inv);
    }
    // Extended Euclid in Q[x]: maintain v with v * this == r (mod minpoly).
    Poly r0(param_->minimal_polynomial().size());
    for (size_t i = 0; i < r0.size(); ++i)
        r0[i] = Rational(param_->minimal_polynomial()[i]);
    Poly r1 = c_;
    poly_trim(r1);
    Poly v0{Rational(0)}, v1{Rational(1)};
    while (poly_degree(r1) > 0) {
        Poly q;
        Poly rem = poly_rem(r0, r1, &q);
        r0 = std::move(r1);
        r1 = std::move(rem);
        // vnew = v0 - q * v1
        Poly vnew(std::max(v0.size(), q.size() + v1.size()), Rational(0));
        for (size_t i = 0; i < v0.size(); ++i) vnew[i] = v0[i];
        for (size_t i = 0; i < q.size(); ++i) {
            if (q[i] == 0) continue;
            for (size_t j = 0; j < v1.size(); ++j)
                vnew[i + j] -= q[i] * v1[j];
        }
        poly_trim(vnew);
        v0 = std::move(v1);
        v1 = std::move(vnew);
    }
    if (poly_degree(r1) < 0)
        throw ContractError("element not invertible; minimal polynomial is reducible");
    const Rational& g = r1[0];
    for (Rational& c : v1) c /= g;
    return from_coefficients(param_, std::move(v1));
}

RingElement operator/(const RingElement& a, const RingElement& b)
{
    return a * b.inverse();
}

bool RingElement::operator==(const RingElement& o) const
{
    check_same_parameter(*this, o);
    return c_ == o.c_;
}

int RingElement::compare(const RingElement& o) const
{
    check_same_parameter(*this, o);
    if (box_.hi < o.box_.lo) return -1;
    if (box_.lo > o.box_.hi) return 1;

    std::vector<Rational> diff(c_.size());
    bool zero = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        diff[i] = c_[i] - o.c_[i];
        if (diff[i] != 0) zero = false;
    }
    if (zero) return 0;

    // Nonzero residue: its value is nonzero (the minimal polynomial is the
    // lowest-degree annihilator), so interval evaluation eventually decides.
    for (;;) {
        auto [lo, hi] = param_->enclosure();
        auto [elo, ehi] = rational_interval_eval(diff, lo, hi);
        if (elo > 0) return 1;
        if (ehi < 0) return -1;
        param_->refine();
    }
}

double RingElement::to_float(double abs_tol) const
{
    if (!(abs_tol > 0))
        throw ContractError("to_float tolerance must be positive");
    if (box_.width() <= abs_tol)
        return box_.mid();

    // Deterministic fallback: refine a local interval from the original
    // isolating interval, never the shared cache.
    auto [lo, hi] = param_->original_interval();
    Rational tol_half(abs_tol);
    tol_half /= 2;
    for (;;) {
        auto [elo, ehi] = rational_interval_eval(c_, lo, hi);
        if (ehi - elo <= tol_half) {
            Rational mid = (elo + ehi) / 2;
            return mpq_get_d(mid.get_mpq_t());
        }
        Rational mid = (lo + hi) / 2;
        int s = param_->sign_at(mid);
        if (s == 0) {
            lo = mid;
            hi = mid;
            continue;
        }
        if (s == param_->sign_at(lo)) lo = mid; else hi = mid;
    }
}

void RingElement::recompute_box()
{
    DInterval x = param_->double_enclosure();
    DInterval acc = dinterval_of(c_.back());
    for (size_t i = c_.size() - 1; i-- > 0;)
        acc = acc * x + dinterval_of(c_[i]);
    box_ = acc;
}

} // namespace olab
