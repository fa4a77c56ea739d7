#include "netresample/stability.hpp"

#include <stdexcept>

#include "netresample/parallel.hpp"
#include "netresample/resampling.hpp"

namespace netresample {

StabilityResult degree_stability(const ModelSpec& spec, std::size_t replicates, std::uint64_t master_seed) {
    if (replicates < 2)
        throw std::invalid_argument("degree_stability needs at least two replicates");
    validate(spec);
    StabilityResult result;
    result.degree_sequences.resize(replicates);
    parallel_for(replicates, [&](std::size_t i) {
        RngStream rng(master_seed, i);
        result.degree_sequences[i] = draw(spec, rng).degrees();
    });

    std::vector<std::vector<double>> as_real(replicates);
    for (std::size_t i = 0; i < replicates; ++i)
        as_real[i].assign(result.degree_sequences[i].begin(), result.degree_sequences[i].end());
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < replicates; ++i) {
        for (std::size_t j = i + 1; j < replicates; ++j) {
            total += ks_two_sample(as_real[i], as_real[j]);
            ++pairs;
        }
    }
    result.mean_pairwise_ks = total / static_cast<double>(pairs);
    return result;
}

} // namespace netresample
