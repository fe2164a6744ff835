#include "bconv/residual_allocation.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <stdexcept>

#include "bconv/rng.hpp"

namespace bconv {

namespace {
constexpr std::int64_t kPartGuard = 10'000'000;
constexpr std::int64_t kChunk = 1024;

// One partition draw plus coupled Bernoulli marks, all from a single stream.
// The stream consumption (stick, mark, stick, mark, ...) does not depend on
// p, which is what makes the monotone coupling across p work.
double draw_z(const MeasureSampler& sampler, Rng& rng, double p, double tol) {
    double z = 0.0;
    double remaining = 1.0;
    std::int64_t k = 0;
    while (remaining >= tol) {
        double y = sampler.draw(rng);
        double part = remaining * y;
        if (rng.uniform() < p) z += part;
        remaining -= part;
        if (++k > kPartGuard)
            throw std::runtime_error(
                "stick-breaking did not terminate within 10^7 parts; "
                "the stick measure appears concentrated at 0");
    }
    return z < 0.0 ? 0.0 : (z > 1.0 ? 1.0 : z);
}
} // namespace

void ConvolutionSampleConfig::validate() const {
    if (p <= 0 || p >= 1) throw std::invalid_argument("p must lie in (0,1)");
    if (samples < 0) throw std::invalid_argument("sample count must be nonnegative");
    if (!(truncation_tol > 0.0) || truncation_tol > 1e-6)
        throw std::invalid_argument("truncation_tol must lie in (0, 1e-6]");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

Partition sample_partition(const MeasureSpec& measure, double tol, std::uint64_t seed) {
    if (!(tol > 0.0) || tol > 1e-6)
        throw std::invalid_argument("truncation tolerance must lie in (0, 1e-6]");
    MeasureSampler sampler(measure);
    Rng rng(seed);
    Partition part;
    part.truncation_tol = tol;
    double remaining = 1.0;
    while (remaining >= tol) {
        double y = sampler.draw(rng);
        double x = remaining * y;
        part.parts.push_back(x);
        remaining -= x; // telescopes, so sum(parts) + remainder stays at 1
        if (static_cast<std::int64_t>(part.parts.size()) > kPartGuard)
            throw std::runtime_error(
                "stick-breaking did not terminate within 10^7 parts; "
                "the stick measure appears concentrated at 0");
    }
    part.remainder = remaining;
    return part;
}

std::vector<double> sample_bernoulli_convolution(const MeasureSpec& measure,
                                                 const ConvolutionSampleConfig& config) {
    config.validate();
    MeasureSampler sampler(measure);
    double p = to_double(config.p);
    std::vector<double> out(static_cast<size_t>(config.samples));

    auto run_chunk = [&](std::int64_t c) {
        Rng rng(config.seed, static_cast<std::uint64_t>(c));
        std::int64_t hi = std::min(config.samples, (c + 1) * kChunk);
        for (std::int64_t i = c * kChunk; i < hi; ++i)
            out[i] = draw_z(sampler, rng, p, config.truncation_tol);
    };

    std::int64_t n_chunks = (config.samples + kChunk - 1) / kChunk;
    if (config.workers <= 1 || n_chunks <= 1) {
        for (std::int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
        return out;
    }
    std::vector<std::future<void>> futs;
    for (int w = 0; w < config.workers; ++w) {
        futs.push_back(std::async(std::launch::async, [&, w] {
            for (std::int64_t c = w; c < n_chunks; c += config.workers) run_chunk(c);
        }));
    }
    for (auto& f : futs) f.get();
    return out;
}

void Partition::write_csv(const std::string& path) const {
    std::ofstream outf(path);
    if (!outf) throw std::runtime_error("cannot open for writing: " + path);
    outf.precision(17);
    outf << "index,part\n";
    for (size_t i = 0; i < parts.size(); ++i) outf << (i + 1) << "," << parts[i] << "\n";
    outf << "remainder," << remainder << "\n";
}

} // namespace bconv
