#include "olab/measures.hpp"
#include "olab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace olab {

namespace {

// splitmix64 finalizer; bijective with full avalanche.
uint64_t mix64(uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

BernoulliWeights::BernoulliWeights(std::vector<double> p) : p_(std::move(p))
{
    if (p_.empty())
        throw ContractError("weights vector is empty");
    double sum = 0;
    for (double v : p_) {
        if (!(v > 0))
            throw ContractError("weights must be strictly positive");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ContractError("weights must sum to 1 (within 1e-12)");
    logp_.resize(p_.size());
    uniform_ = true;
    for (size_t i = 0; i < p_.size(); ++i) {
        logp_[i] = std::log(p_[i]);
        if (std::abs(p_[i] - 1.0 / static_cast<double>(p_.size())) > 1e-12)
            uniform_ = false;
    }
}

BernoulliWeights BernoulliWeights::uniform(size_t m)
{
    if (m == 0)
        throw ContractError("alphabet size must be positive");
    return BernoulliWeights(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

double entropy(const BernoulliWeights& w)
{
    double h = 0;
    for (size_t i = 0; i < w.size(); ++i)
        h -= w[i] * w.log_probabilities()[i];
    return h;
}

double birkhoff_potential_average(const BernoulliWeights& w, const Word& word)
{
    if (word.empty())
        throw ContractError("birkhoff average requires a nonempty word");
    double acc = 0;
    for (uint32_t s : word.symbols) {
        if (s >= w.size())
            throw ContractError("word symbol outside the alphabet");
        acc += w.log_probabilities()[s];
    }
    return acc / static_cast<double>(word.depth());
}

WordSampler::WordSampler(const BernoulliWeights& w, uint64_t seed) : seed_(seed)
{
    cdf_.resize(w.size());
    double acc = 0;
    for (size_t i = 0; i < w.size(); ++i) {
        acc += w[i];
        cdf_[i] = acc;
    }
    cdf_.back() = 1.0;
}

double WordSampler::uniform01(uint64_t sample_index, uint64_t position) const
{
    uint64_t h = mix64(mix64(mix64(seed_) ^ sample_index) ^ position);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

uint32_t WordSampler::symbol(uint64_t sample_index, uint64_t position) const
{
    double u = uniform01(sample_index, position);
    size_t i = static_cast<size_t>(
        std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
    if (i >= cdf_.size()) i = cdf_.size() - 1;
    return static_cast<uint32_t>(i);
}

Word WordSampler::word(uint64_t sample_index, size_t depth) const
{
    Word w;
    w.symbols.resize(depth);
    for (size_t j = 0; j < depth; ++j)
        w.symbols[j] = symbol(sample_index, j);
    return w;
}

size_t truncation_depth(size_t n, double max_abs_ratio, double extra_log_precision)
{
    double l = -std::log(max_abs_ratio);
    if (!(l > 0))
        throw ContractError("max ratio must be strictly inside (0,1)");
    double extra = std::ceil(extra_log_precision / l);
    extra = std::min(extra, 100000.0);
    return n + static_cast<size_t>(std::max(1.0, extra));
}

} // namespace olab
