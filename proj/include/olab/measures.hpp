#ifndef OLAB_MEASURES_HPP
#define OLAB_MEASURES_HPP

#include "olab/ifs.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace olab {

// A probability vector p with p_i > 0, sum 1 (within 1e-12), defining the
// Bernoulli measure mu_p^+ on the symbol space and the locally constant
// potential psi(omega, x) = log p_{omega_1}.
class BernoulliWeights {
public:
    explicit BernoulliWeights(std::vector<double> p);
    static BernoulliWeights uniform(size_t m);

    size_t size() const { return p_.size(); }
    double operator[](size_t i) const { return p_[i]; }
    const std::vector<double>& probabilities() const { return p_; }
    const std::vector<double>& log_probabilities() const { return logp_; }
    bool is_uniform() const { return uniform_; }

private:
    std::vector<double> p_;
    std::vector<double> logp_;
    bool uniform_;
};

// -sum p_i log p_i (natural log).
double entropy(const BernoulliWeights& w);

// (1/n) sum_k log p_{word_k}; the Birkhoff average of the potential.
double birkhoff_potential_average(const BernoulliWeights& w, const Word& word);

// |chi| = sum p_i * (-log|ratio_i|) > 0 for affine maps. The signed
// convention chi = sum p_i log|ratio_i| is -lyapunov(...).
template <class S>
double lyapunov(const AffineSystem<S>& sys, const BernoulliWeights& w)
{
    if (w.size() != sys.alphabet_size())
        throw ContractError("weights and system alphabet sizes differ");
    double acc = 0;
    for (size_t i = 0; i < w.size(); ++i)
        acc += w[i] * (-std::log(std::abs(approx(sys.map(i).ratio))));
    return acc;
}

// Counter-based word sampler: the symbol at (sample, position) is a pure
// function of (seed, sample, position), so per-sample work is
// order-independent and parallelizes with bit-identical output.
class WordSampler {
public:
    WordSampler(const BernoulliWeights& w, uint64_t seed);

    uint32_t symbol(uint64_t sample_index, uint64_t position) const;
    Word word(uint64_t sample_index, size_t depth) const;
    double uniform01(uint64_t sample_index, uint64_t position) const;

private:
    std::vector<double> cdf_;
    uint64_t seed_;
};

template <class S>
struct SampledOrbit {
    Word word;                  // depth N_trunc >= n
    Interval<S> point_interval; // prefix cylinder of the truncated word
    uint64_t seed_id = 0;
};

// Truncation depth giving point brackets far smaller than depth-n cylinder
// gaps: n + ceil(extra / |log r_max|).
size_t truncation_depth(size_t n, double max_abs_ratio, double extra_log_precision = 40.0);

template <class S>
std::vector<SampledOrbit<S>>
sample_words(const AffineSystem<S>& sys, const BernoulliWeights& w,
             size_t n, size_t count, uint64_t seed)
{
    if (n < 1 || count < 1)
        throw ContractError("sample_words requires n >= 1 and count >= 1");
    if (w.size() != sys.alphabet_size())
        throw ContractError("weights and system alphabet sizes differ");
    const size_t n_trunc = truncation_depth(n, sys.max_abs_ratio());
    WordSampler sampler(w, seed);
    std::vector<SampledOrbit<S>> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        SampledOrbit<S> o;
        o.word = sampler.word(i, n_trunc);
        o.point_interval = project_point(sys, o.word);
        o.seed_id = i;
        out.push_back(std::move(o));
    }
    return out;
}

} // namespace olab

#endif
