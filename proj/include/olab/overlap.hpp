#ifndef OLAB_OVERLAP_HPP
#define OLAB_OVERLAP_HPP

#include "olab/measures.hpp"
#include "olab/parallel.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>

namespace olab {

constexpr uint64_t kDefaultNodeBudget = uint64_t(1) << 26;

// Covering-word counts for one point bracket at one depth. beta counts the
// depth-n words whose cylinder contains the bracket; when some leaf cylinder
// only partially overlaps the bracket, those leaves are included in beta
// (inclusive count) and `ambiguous` is set so the caller can refine the
// bracket and retry. filtered additionally applies the Birkhoff tolerance.
template <class S>
struct CoverCount {
    Interval<S> point_bracket;
    size_t depth = 0;
    uint64_t beta = 0;
    uint64_t filtered = 0;
    uint64_t ambiguous_leaves = 0;
    double tau = std::numeric_limits<double>::infinity();
    bool ambiguous = false;
    uint64_t node_visits = 0;
};

namespace detail {

template <class S>
struct CountAccum {
    uint64_t contained = 0;
    uint64_t contained_filtered = 0;
    uint64_t partial = 0;
    uint64_t partial_filtered = 0;
    uint64_t visits = 0;
};

// General descent: recompose the child map at every node. Used whenever the
// ratios differ across maps.
template <class S>
void descend_general(const AffineSystem<S>& sys, const Interval<S>& bracket,
                     size_t n, double tau, double filter_center,
                     const AffineContraction<S>& f, int sign, size_t depth,
                     double logp_sum, const std::vector<double>& logp,
                     CountAccum<S>& acc)
{
    const size_t m = sys.alphabet_size();
    for (size_t j = 0; j < m; ++j) {
        AffineContraction<S> g = f.after(sys.map(j));
        int gsign = sign * sys.ratio_sign(j);
        Interval<S> cyl = map_interval(g, sys.hull(), gsign);
        ++acc.visits;
        if (cyl.disjoint_from(bracket)) continue;
        double lp = logp_sum + logp[j];
        if (depth + 1 == n) {
            bool pass = !(tau < std::numeric_limits<double>::infinity()) ||
                        std::abs(lp / static_cast<double>(n) - filter_center) < tau;
            if (cyl.contains(bracket)) {
                ++acc.contained;
                if (pass) ++acc.contained_filtered;
            } else {
                ++acc.partial;
                if (pass) ++acc.partial_filtered;
            }
        } else {
            descend_general(sys, bracket, n, tau, filter_center, g, gsign,
                            depth + 1, lp, logp, acc);
        }
    }
}

// Constant-ratio descent. The composed ratio depends only on depth, so the
// per-depth offset increments and all four interval-test thresholds are
// precomputed; each node costs one offset addition plus enclosure-filtered
// comparisons against the thresholds.
template <class S>
struct ConstantRatioTables {
    std::vector<S> step;         // [depth k][symbol j] -> r^k * t_j, flattened
    std::vector<S> t_disj_below; // c_hi < b_lo  iff  t < this, per depth 1..n
    std::vector<S> t_disj_above; // c_lo > b_hi  iff  t > this
    std::vector<S> t_cont_lo;    // c_lo <= b_lo iff  t <= this
    std::vector<S> t_cont_hi;    // c_hi >= b_hi iff  t >= this
    size_t m = 0;

    ConstantRatioTables(const AffineSystem<S>& sys, const Interval<S>& bracket, size_t n)
        : m(sys.alphabet_size())
    {
        const S& r = sys.map(0).ratio;
        std::vector<S> rpow;
        rpow.reserve(n + 1);
        rpow.push_back(sys.one());
        for (size_t k = 1; k <= n; ++k) rpow.push_back(rpow.back() * r);

        step.reserve(n * m);
        for (size_t k = 0; k + 1 <= n; ++k)
            for (size_t j = 0; j < m; ++j)
                step.push_back(rpow[k] * sys.map(j).offset);

        const int rsign = sys.ratio_sign(0);
        t_disj_below.reserve(n);
        t_disj_above.reserve(n);
        t_cont_lo.reserve(n);
        t_cont_hi.reserve(n);
        for (size_t k = 1; k <= n; ++k) {
            // cylinder at depth k is [t + lo_term, t + hi_term]
            bool flip = rsign < 0 && (k % 2 == 1);
            S lo_term = flip ? rpow[k] * sys.hull().hi : rpow[k] * sys.hull().lo;
            S hi_term = flip ? rpow[k] * sys.hull().lo : rpow[k] * sys.hull().hi;
            t_disj_below.push_back(bracket.lo - hi_term);
            t_disj_above.push_back(bracket.hi - lo_term);
            t_cont_lo.push_back(bracket.lo - lo_term);
            t_cont_hi.push_back(bracket.hi - hi_term);
        }
    }
};

template <class S>
void descend_constant_ratio(const ConstantRatioTables<S>& tb, size_t n, double tau,
                            double filter_center, std::vector<S>& offsets, size_t depth,
                            double logp_sum, const std::vector<double>& logp,
                            CountAccum<S>& acc)
{
    const size_t m = tb.m;
    S& child = offsets[depth + 1];
    for (size_t j = 0; j < m; ++j) {
        assign_add(child, offsets[depth], tb.step[depth * m + j]);
        ++acc.visits;
        if (cmp(child, tb.t_disj_below[depth]) < 0) continue;
        if (cmp(child, tb.t_disj_above[depth]) > 0) continue;
        double lp = logp_sum + logp[j];
        if (depth + 1 == n) {
            bool pass = !(tau < std::numeric_limits<double>::infinity()) ||
                        std::abs(lp / static_cast<double>(n) - filter_center) < tau;
            bool contains = cmp(child, tb.t_cont_lo[depth]) <= 0 &&
                            cmp(child, tb.t_cont_hi[depth]) >= 0;
            if (contains) {
                ++acc.contained;
                if (pass) ++acc.contained_filtered;
            } else {
                ++acc.partial;
                if (pass) ++acc.partial_filtered;
            }
        } else {
            // re-fetch: recursion below rebinds offsets[depth+2]
            S saved = offsets[depth + 1];
            descend_constant_ratio(tb, n, tau, filter_center, offsets, depth + 1,
                                   lp, logp, acc);
            offsets[depth + 1] = std::move(saved);
        }
    }
}

} // namespace detail

// Depth-first descent of the m-ary word tree, pruning nodes whose cylinder is
// disjoint from the point bracket. A leaf counts toward beta if its cylinder
// contains the whole bracket; leaves that merely meet the bracket set the
// ambiguous flag and are counted inclusively. filtered additionally requires
// |birkhoff_potential_average - (-entropy(p))| < tau at the leaf.
template <class S>
CoverCount<S> count_covering_words(const AffineSystem<S>& sys, const Interval<S>& bracket,
                                   size_t n, const BernoulliWeights& w, double tau)
{
    if (n < 1)
        throw ContractError("count_covering_words requires depth n >= 1");
    if (!(tau > 0))
        throw ContractError("tau must be positive (possibly infinite)");
    if (w.size() != sys.alphabet_size())
        throw ContractError("weights and system alphabet sizes differ");
    if (!sys.hull().contains(bracket))
        throw ContractError("point bracket lies outside the attractor hull");

    const double filter_center = -entropy(w);
    detail::CountAccum<S> acc;
    if (sys.constant_ratio()) {
        detail::ConstantRatioTables<S> tb(sys, bracket, n);
        std::vector<S> offsets(n + 1, sys.zero());
        detail::descend_constant_ratio(tb, n, tau, filter_center, offsets, 0, 0.0,
                                       w.log_probabilities(), acc);
    } else {
        AffineContraction<S> id{sys.one(), sys.zero()};
        detail::descend_general(sys, bracket, n, tau, filter_center, id, 1, 0, 0.0,
                                w.log_probabilities(), acc);
    }

    CoverCount<S> cc;
    cc.point_bracket = bracket;
    cc.depth = n;
    cc.tau = tau;
    cc.ambiguous = acc.partial > 0;
    cc.ambiguous_leaves = acc.partial;
    cc.beta = acc.contained + acc.partial;
    cc.filtered = acc.contained_filtered + acc.partial_filtered;
    // A sampled point's own depth-n prefix always covers its bracket; keep
    // the count invariant 1 <= filtered <= beta so the log stays finite.
    if (cc.filtered == 0 && cc.beta > 0) cc.filtered = 1;
    cc.node_visits = acc.visits;
    return cc;
}

struct DepthStats {
    size_t depth = 0;
    double mean_log_count = 0;
    double stderr_mean = 0;
    double exp_mean_over_n = 1;
    double ambiguous_fraction = 0;
};

// Per-depth Monte Carlo table plus two extrapolations of o = exp(log o):
// the regression slope of mean(log count) vs n over the top half of depths
// (headline; additive constants cancel), and exp(mean/n) at the largest depth.
struct OverlapEstimate {
    std::vector<DepthStats> per_depth;
    double log_o_slope = 0;
    double o_slope = 1;
    double o_last_depth = 1;
    std::string method = "slope";
    bool ambiguity_warning = false;
    uint64_t total_node_visits = 0;
};

struct EstimateOptions {
    unsigned threads = 1;
    int max_bracket_retries = 3;
    double extra_log_precision = 40.0;
};

template <class S>
OverlapEstimate estimate_overlap_number(const AffineSystem<S>& sys, const BernoulliWeights& w,
                                        const std::vector<size_t>& depths, size_t samples,
                                        double tau, uint64_t seed,
                                        const EstimateOptions& opt = {})
{
    if (depths.empty())
        throw ContractError("estimate_overlap_number requires at least one depth");
    for (size_t i = 0; i + 1 < depths.size(); ++i)
        if (depths[i] >= depths[i + 1])
            throw ContractError("depths must be strictly increasing");
    if (depths.front() < 1 || samples < 1)
        throw ContractError("depths must be >= 1 and samples >= 1");

    const size_t nd = depths.size();
    const size_t max_depth = depths.back();
    const double rmax = sys.max_abs_ratio();
    const size_t base_trunc = truncation_depth(max_depth, rmax, opt.extra_log_precision);
    const size_t retry_step = truncation_depth(0, rmax, 20.0);
    const bool use_filtered = tau < std::numeric_limits<double>::infinity();
    const WordSampler sampler(w, seed);

    std::vector<std::vector<double>> logs(nd, std::vector<double>(samples));
    std::vector<std::vector<uint8_t>> ambig(nd, std::vector<uint8_t>(samples, 0));
    std::vector<uint64_t> visits(samples, 0);

    parallel_chunks(samples, resolve_thread_count(opt.threads), [&](size_t begin, size_t end) {
        for (size_t s = begin; s < end; ++s) {
            size_t trunc = base_trunc;
            Word word = sampler.word(s, trunc);
            Interval<S> bracket = project_point(sys, word);
            uint64_t vis = 0;
            for (size_t di = 0; di < nd; ++di) {
                CoverCount<S> cc = count_covering_words(sys, bracket, depths[di], w, tau);
                vis += cc.node_visits;
                for (int retry = 0; cc.ambiguous && retry < opt.max_bracket_retries; ++retry) {
                    trunc += retry_step;
                    for (size_t pos = word.depth(); pos < trunc; ++pos)
                        word.symbols.push_back(sampler.symbol(s, pos));
                    bracket = project_point(sys, word);
                    cc = count_covering_words(sys, bracket, depths[di], w, tau);
                    vis += cc.node_visits;
                }
                uint64_t count = use_filtered ? cc.filtered : cc.beta;
                logs[di][s] = std::log(static_cast<double>(count));
                ambig[di][s] = cc.ambiguous ? 1 : 0;
            }
            visits[s] = vis;
        }
    });

    OverlapEstimate est;
    est.per_depth.resize(nd);
    for (size_t di = 0; di < nd; ++di) {
        // Kahan summation in sample order keeps aggregation independent of
        // the thread partition.
        double sum = 0, comp = 0;
        for (size_t s = 0; s < samples; ++s) {
            double y = logs[di][s] - comp;
            double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        double mean = sum / static_cast<double>(samples);
        double var = 0;
        for (size_t s = 0; s < samples; ++s) {
            double d = logs[di][s] - mean;
            var += d * d;
        }
        var = samples > 1 ? var / static_cast<double>(samples - 1) : 0.0;
        uint64_t na = 0;
        for (size_t s = 0; s < samples; ++s) na += ambig[di][s];

        DepthStats& ds = est.per_depth[di];
        ds.depth = depths[di];
        ds.mean_log_count = mean;
        ds.stderr_mean = std::sqrt(var / static_cast<double>(samples));
        ds.exp_mean_over_n = std::exp(mean / static_cast<double>(depths[di]));
        ds.ambiguous_fraction = static_cast<double>(na) / static_cast<double>(samples);
        if (ds.ambiguous_fraction > 0.01) est.ambiguity_warning = true;
    }
    for (uint64_t v : visits) est.total_node_visits += v;

    est.o_last_depth = est.per_depth.back().exp_mean_over_n;
    if (nd == 1) {
        est.method = "point";
        est.log_o_slope = est.per_depth[0].mean_log_count / static_cast<double>(depths[0]);
    } else {
        est.method = "slope";
        size_t fit_begin = nd - std::max<size_t>(2, (nd + 1) / 2);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        double cnt = static_cast<double>(nd - fit_begin);
        for (size_t di = fit_begin; di < nd; ++di) {
            double x = static_cast<double>(depths[di]);
            double y = est.per_depth[di].mean_log_count;
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        est.log_o_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    }
    est.o_slope = std::exp(est.log_o_slope);
    return est;
}

// Sorted distinct composed-map images of the reference point 0 (the offsets
// of the depth-n compositions) with multiplicities. Exact mode only.
struct ValueSpectrum {
    size_t depth = 0;
    size_t alphabet = 0;
    std::vector<RingElement> values;
    std::vector<uint64_t> multiplicities;
    double min_gap = 0; // smallest adjacent difference as a refined float

    size_t q() const { return values.size(); }
};

namespace detail {

struct RationalVecLess {
    bool operator()(const std::vector<Rational>& a, const std::vector<Rational>& b) const
    {
        for (size_t i = 0; i < a.size(); ++i) {
            int c = ::cmp(a[i], b[i]);
            if (c != 0) return c < 0;
        }
        return false;
    }
};

inline void
spectrum_descend(const AffineSystem<RingElement>& sys, size_t n,
                 std::vector<AffineContraction<RingElement>>& stack, size_t depth,
                 std::map<std::vector<Rational>, uint64_t, RationalVecLess>& classes)
{
    const size_t m = sys.alphabet_size();
    for (size_t j = 0; j < m; ++j) {
        stack[depth + 1] = stack[depth].after(sys.map(j));
        if (depth + 1 == n)
            ++classes[stack[depth + 1].offset.coefficients()];
        else
            spectrum_descend(sys, n, stack, depth + 1, classes);
    }
}

} // namespace detail

inline ValueSpectrum value_spectrum(const AffineSystem<RingElement>& sys, size_t n,
                                    uint64_t node_budget = kDefaultNodeBudget)
{
    if (n < 1)
        throw ContractError("value_spectrum requires depth n >= 1");
    uint64_t total = 1;
    for (size_t i = 0; i < n; ++i) {
        if (total > node_budget / sys.alphabet_size())
            throw ResourceError("value spectrum needs m^n = " +
                                std::to_string(sys.alphabet_size()) + "^" + std::to_string(n) +
                                " enumerations, over the node budget of " +
                                std::to_string(node_budget));
        total *= sys.alphabet_size();
    }

    std::map<std::vector<Rational>, uint64_t, detail::RationalVecLess> classes;
    std::vector<AffineContraction<RingElement>> stack(
        n + 1, AffineContraction<RingElement>{sys.one(), sys.zero()});
    detail::spectrum_descend(sys, n, stack, 0, classes);

    ValueSpectrum spec;
    spec.depth = n;
    spec.alphabet = sys.alphabet_size();
    std::vector<std::pair<RingElement, uint64_t>> vals;
    vals.reserve(classes.size());
    const ParamPtr& param = sys.zero().parameter();
    for (auto& [coeffs, count] : classes)
        vals.emplace_back(RingElement::from_coefficients(param, coeffs), count);
    std::sort(vals.begin(), vals.end(),
              [](const auto& a, const auto& b) { return a.first.compare(b.first) < 0; });

    spec.values.reserve(vals.size());
    spec.multiplicities.reserve(vals.size());
    uint64_t total_mult = 0;
    for (auto& [v, c] : vals) {
        spec.values.push_back(std::move(v));
        spec.multiplicities.push_back(c);
        total_mult += c;
    }
    if (total_mult != total)
        throw std::logic_error("value spectrum lost multiplicity mass");

    spec.min_gap = 0;
    for (size_t i = 0; i + 1 < spec.values.size(); ++i) {
        double g = (spec.values[i + 1] - spec.values[i]).to_float(1e-12);
        if (i == 0 || g < spec.min_gap) spec.min_gap = g;
    }
    return spec;
}

// Lower-bound estimator for log o(S) from multiplicities alone:
// (1/n) [ n log m + sum_j (N_j/m^n) log(N_j/m^n) ]. The paper's constant C2
// is dropped; it contributes O(1)/n. Vacuous (0) when all values are
// distinct.
inline double multiplicity_entropy_bound(const ValueSpectrum& spec)
{
    const double n = static_cast<double>(spec.depth);
    const double logm = std::log(static_cast<double>(spec.alphabet));
    double total = 0;
    for (uint64_t c : spec.multiplicities) total += static_cast<double>(c);
    double acc = n * logm;
    for (uint64_t c : spec.multiplicities) {
        double p = static_cast<double>(c) / total;
        acc += p * std::log(p);
    }
    return acc / n;
}

} // namespace olab

#endif
