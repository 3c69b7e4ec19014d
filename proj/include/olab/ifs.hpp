#ifndef OLAB_IFS_HPP
#define OLAB_IFS_HPP

#include "olab/errors.hpp"
#include "olab/scalars.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace olab {

// A finite symbol sequence over the alphabet {0, ..., m-1}.
struct Word {
    std::vector<uint32_t> symbols;

    Word() = default;
    explicit Word(std::vector<uint32_t> s) : symbols(std::move(s)) {}

    size_t depth() const { return symbols.size(); }
    bool empty() const { return symbols.empty(); }
    uint32_t operator[](size_t i) const { return symbols[i]; }

    Word extended(uint32_t sym) const
    {
        Word w(*this);
        w.symbols.push_back(sym);
        return w;
    }

    bool is_prefix_of(const Word& other) const
    {
        if (depth() > other.depth()) return false;
        for (size_t i = 0; i < depth(); ++i)
            if (symbols[i] != other.symbols[i]) return false;
        return true;
    }

    bool operator==(const Word& o) const { return symbols == o.symbols; }
    bool operator<(const Word& o) const { return symbols < o.symbols; }

    std::string str() const
    {
        std::string s;
        for (size_t i = 0; i < symbols.size(); ++i) {
            if (i) s += '.';
            s += std::to_string(symbols[i]);
        }
        return s;
    }
};

// x -> ratio * x + offset with 0 < |ratio| < 1.
template <class S>
struct AffineContraction {
    S ratio;
    S offset;

    S apply(const S& x) const { return ratio * x + offset; }

    // (*this) after `inner`: x -> this(inner(x)).
    AffineContraction after(const AffineContraction& inner) const
    { return {ratio * inner.ratio, ratio * inner.offset + offset}; }

    bool operator==(const AffineContraction& o) const
    { return cmp(ratio, o.ratio) == 0 && cmp(offset, o.offset) == 0; }
};

template <class S>
Interval<S> map_interval(const AffineContraction<S>& f, const Interval<S>& iv, int ratio_sign)
{
    if (ratio_sign > 0)
        return {f.apply(iv.lo), f.apply(iv.hi)};
    return {f.apply(iv.hi), f.apply(iv.lo)};
}

// Smallest interval invariant under all maps. For each candidate pair of
// extremal maps solve the two linear fixed-point equations exactly, then keep
// the solution that is invariant and attained at both endpoints.
template <class S>
Interval<S> attractor_hull(const std::vector<AffineContraction<S>>& maps)
{
    if (maps.empty())
        throw ContractError("attractor_hull requires at least one map");
    const S zero = zero_like(maps[0].ratio);
    const S one = one_like(maps[0].ratio);

    std::vector<int> signs(maps.size());
    for (size_t i = 0; i < maps.size(); ++i) {
        signs[i] = cmp(maps[i].ratio, zero);
        if (signs[i] == 0)
            throw ContractError("map ratio must be nonzero");
    }

    auto lo_image = [&](size_t i, const S& a, const S& b) {
        return signs[i] > 0 ? maps[i].apply(a) : maps[i].apply(b);
    };
    auto hi_image = [&](size_t i, const S& a, const S& b) {
        return signs[i] > 0 ? maps[i].apply(b) : maps[i].apply(a);
    };

    for (size_t i = 0; i < maps.size(); ++i) {
        for (size_t j = 0; j < maps.size(); ++j) {
            // A = a1*A + b1*B + t_i,  B = a2*A + b2*B + t_j
            S a1 = signs[i] > 0 ? maps[i].ratio : zero;
            S b1 = signs[i] > 0 ? zero : maps[i].ratio;
            S a2 = signs[j] > 0 ? zero : maps[j].ratio;
            S b2 = signs[j] > 0 ? maps[j].ratio : zero;
            S det = (one - a1) * (one - b2) - b1 * a2;
            if (cmp(det, zero) == 0) continue;
            S A = ((one - b2) * maps[i].offset + b1 * maps[j].offset) / det;
            S B = (a2 * maps[i].offset + (one - a1) * maps[j].offset) / det;
            if (cmp(A, B) > 0) continue;

            Interval<S> hull{A, B};
            bool ok = true;
            bool lo_attained = false, hi_attained = false;
            for (size_t k = 0; k < maps.size() && ok; ++k) {
                S ilo = lo_image(k, A, B);
                S ihi = hi_image(k, A, B);
                int cl = cmp(A, ilo), ch = cmp(ihi, B);
                if (cl > 0 || ch > 0) ok = false;
                if (cl == 0) lo_attained = true;
                if (ch == 0) hi_attained = true;
            }
            if (ok && lo_attained && hi_attained)
                return hull;
        }
    }
    throw ContractError("no invariant hull found; maps are not contractions");
}

// An ordered list of affine contractions plus the exact attractor hull.
template <class S>
class AffineSystem {
public:
    explicit AffineSystem(std::vector<AffineContraction<S>> maps)
        : maps_(std::move(maps))
    {
        if (maps_.empty())
            throw ContractError("affine system needs at least one map");
        const S zero = zero_like(maps_[0].ratio);
        const S one = one_like(maps_[0].ratio);
        signs_.resize(maps_.size());
        constant_ratio_ = true;
        for (size_t i = 0; i < maps_.size(); ++i) {
            signs_[i] = cmp(maps_[i].ratio, zero);
            if (signs_[i] == 0)
                throw ContractError("map " + std::to_string(i) + " has zero ratio");
            if (cmp(maps_[i].ratio, one) >= 0 || cmp(maps_[i].ratio, -one) <= 0)
                throw ContractError("map " + std::to_string(i) + " is not a contraction");
            if (cmp(maps_[i].ratio, maps_[0].ratio) != 0) constant_ratio_ = false;
        }
        hull_ = attractor_hull(maps_);
        // phi_i(hull) subset of hull, exactly, for every i.
        for (size_t i = 0; i < maps_.size(); ++i) {
            Interval<S> img = map_interval(maps_[i], hull_, signs_[i]);
            if (!hull_.contains(img))
                throw ContractError("hull invariance check failed");
        }
    }

    size_t alphabet_size() const { return maps_.size(); }
    const std::vector<AffineContraction<S>>& maps() const { return maps_; }
    const AffineContraction<S>& map(size_t i) const { return maps_[i]; }
    const Interval<S>& hull() const { return hull_; }
    int ratio_sign(size_t i) const { return signs_[i]; }
    bool constant_ratio() const { return constant_ratio_; }

    S zero() const { return zero_like(maps_[0].ratio); }
    S one() const { return one_like(maps_[0].ratio); }

    double max_abs_ratio() const
    {
        double mx = 0;
        for (const auto& f : maps_) mx = std::max(mx, std::abs(approx(f.ratio)));
        return mx;
    }

private:
    std::vector<AffineContraction<S>> maps_;
    std::vector<int> signs_;
    Interval<S> hull_;
    bool constant_ratio_ = false;
};

// phi_w = phi_{w1} o phi_{w2} o ... o phi_{wn} (leftmost applied last).
template <class S>
AffineContraction<S> compose(const AffineSystem<S>& sys, const Word& w)
{
    if (w.empty())
        throw ContractError("compose requires a nonempty word");
    AffineContraction<S> acc = sys.map(w[0]);
    for (size_t i = 1; i < w.depth(); ++i)
        acc = acc.after(sys.map(w[i]));
    return acc;
}

// phi_w(hull) as a closed interval with exact endpoints.
template <class S>
Interval<S> cylinder_interval(const AffineSystem<S>& sys, const Word& w)
{
    AffineContraction<S> f = compose(sys, w);
    int sign = cmp(f.ratio, sys.zero());
    return map_interval(f, sys.hull(), sign);
}

// The prefix cylinder bracketing pi(omega) for every extension of `prefix`;
// its width bounds the truncation error.
template <class S>
Interval<S> project_point(const AffineSystem<S>& sys, const Word& prefix)
{
    if (prefix.empty())
        throw ContractError("project_point requires a nonempty prefix");
    return cylinder_interval(sys, prefix);
}

} // namespace olab

#endif
