#pragma once

// Stochastic simulation of the full architecture: N SPDC sources fire, each
// heralding arm is measured by a lossy number-resolving detector, a
// multiplexer routes n heralded modes into the interferometer, the output is
// drawn from the exact permanent-based distribution, and lossy output
// detection decides post-selection.

#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <stdexcept>
#include <thread>
#include <vector>

#include "spdcbs/analytic.hpp"
#include "spdcbs/distribution.hpp"
#include "spdcbs/fock.hpp"
#include "spdcbs/matrix.hpp"
#include "spdcbs/rng.hpp"

namespace spdcbs {

// Photon-pair count of one SPDC firing: geometric with ratio tanh^2(r),
// drawn by closed-form inverse CDF so no truncation is involved.
inline int sample_spdc(const SpdcParams& source, RngStream& rng) {
    const double q = source.pair_ratio();
    const double u = rng.uniform();
    if (q <= 0.0) return 0;
    const int s = static_cast<int>(std::floor(std::log(1.0 - u) / std::log(q)));
    return s < 0 ? 0 : s;
}

// Detected count for `emitted` photons: per-photon independent survival.
inline int sample_detection(const DetectorModel& detector, int emitted, RngStream& rng) {
    if (emitted < 0) throw std::domain_error("sample_detection: emitted count must be >= 0");
    return rng.binomial(emitted, detector.eta);
}

struct TrialRecord {
    std::vector<int> true_counts;      // pairs emitted per source
    std::vector<int> herald_counts;    // herald detector outcome per source
    std::vector<int> heralded_indices; // sources reporting exactly one photon
    std::vector<int> routed_sources;   // the n sources sent into the interferometer
    FockState input_config;            // true photon numbers entering u
    FockState output_config;           // detected output counts
    bool prepared = false;             // at least n sources heralded
    bool input_correct = false;        // every routed source truly emitted one pair
    bool post_selected = false;        // total detected photons equals n
};

using DistributionCache = std::map<FockState, OutputDistribution>;

// One end-to-end run. Draw order is fixed (all source emissions, then all
// herald detections, then one output draw, then per-mode output detection)
// so a trial is a pure function of its stream. Routing picks the n
// lowest-indexed heralded sources; their true photon numbers enter the
// interferometer, which is where heralding errors corrupt the input.
inline TrialRecord run_trial(const ArchitectureParams& arch, const ComplexMatrix& u,
                             RngStream& rng, const ResourceCaps& caps = {},
                             DistributionCache* cache = nullptr) {
    if (u.rows() != arch.modes || u.cols() != arch.modes) {
        throw std::invalid_argument("run_trial: unitary size must match arch.modes");
    }
    if (arch.sources < arch.photons || arch.modes < arch.photons) {
        throw std::invalid_argument("run_trial: requires sources >= photons and modes >= photons");
    }

    TrialRecord rec;
    rec.true_counts.resize(arch.sources);
    rec.herald_counts.resize(arch.sources);
    for (int i = 0; i < arch.sources; ++i) {
        rec.true_counts[i] = sample_spdc(arch.spdc, rng);
    }
    for (int i = 0; i < arch.sources; ++i) {
        rec.herald_counts[i] = sample_detection(arch.herald_detector, rec.true_counts[i], rng);
        if (rec.herald_counts[i] == 1) rec.heralded_indices.push_back(i);
    }

    if (static_cast<int>(rec.heralded_indices.size()) < arch.photons) {
        return rec;  // preparation failure; recorded, not retried
    }
    rec.prepared = true;
    rec.routed_sources.assign(rec.heralded_indices.begin(),
                              rec.heralded_indices.begin() + arch.photons);

    rec.input_config.occupations.assign(arch.modes, 0);
    rec.input_correct = true;
    for (int k = 0; k < arch.photons; ++k) {
        const int emitted = rec.true_counts[rec.routed_sources[k]];
        rec.input_config.occupations[k] = emitted;
        if (emitted != 1) rec.input_correct = false;
    }

    const OutputDistribution* dist = nullptr;
    OutputDistribution local;
    if (cache != nullptr) {
        auto it = cache->find(rec.input_config);
        if (it == cache->end()) {
            it = cache->emplace(rec.input_config, output_distribution(u, rec.input_config, caps))
                     .first;
        }
        dist = &it->second;
    } else {
        local = output_distribution(u, rec.input_config, caps);
        dist = &local;
    }

    const FockState& arrived = sample_one(*dist, rng);
    rec.output_config.occupations.resize(arch.modes);
    int detected_total = 0;
    for (int j = 0; j < arch.modes; ++j) {
        rec.output_config.occupations[j] =
            sample_detection(arch.output_detector, arrived.occupations[j], rng);
        detected_total += rec.output_config.occupations[j];
    }
    rec.post_selected = (detected_total == arch.photons);
    return rec;
}

// Aggregated counts over an ensemble. All rates are exact functions of the
// integer counts, so two runs with identical counts serialize identically.
struct EnsembleStats {
    long long trials = 0;
    long long prepared = 0;               // heralding produced >= n sources
    long long correct_input = 0;          // among prepared
    long long post_selected_any = 0;      // among prepared
    long long post_selected_correct = 0;  // among prepared with correct input

    static double ratio(long long num, long long den) {
        return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
    }
    static double stderr_of(long long num, long long den) {
        if (den <= 0) return 0.0;
        const double p = ratio(num, den);
        return std::sqrt(p * (1.0 - p) / static_cast<double>(den));
    }

    // Preparation success frequency over all trials.
    double prep_rate() const { return ratio(prepared, trials); }
    double prep_rate_stderr() const { return stderr_of(prepared, trials); }

    // Correct-input frequency among prepared trials.
    double par_correct_rate() const { return ratio(correct_input, prepared); }
    double par_correct_rate_stderr() const { return stderr_of(correct_input, prepared); }

    // Post-selection frequency among prepared trials with correct input.
    double post_select_rate() const { return ratio(post_selected_correct, correct_input); }
    double post_select_rate_stderr() const {
        return stderr_of(post_selected_correct, correct_input);
    }

    // Post-selection frequency among all prepared trials, any input.
    double post_any_rate() const { return ratio(post_selected_any, prepared); }

    // Fraction of post-selected trials whose input was actually correct.
    double correct_given_post_rate() const {
        return ratio(post_selected_correct, post_selected_any);
    }

    void absorb(const TrialRecord& rec) {
        ++trials;
        if (!rec.prepared) return;
        ++prepared;
        if (rec.input_correct) ++correct_input;
        if (rec.post_selected) {
            ++post_selected_any;
            if (rec.input_correct) ++post_selected_correct;
        }
    }

    void merge(const EnsembleStats& other) {
        trials += other.trials;
        prepared += other.prepared;
        correct_input += other.correct_input;
        post_selected_any += other.post_selected_any;
        post_selected_correct += other.post_selected_correct;
    }
};

// Run `trials` independent trials. Trial i always uses stream i of the
// master seed, and aggregation is a sum of integer counters, so the result
// is identical for any worker count. Pass `records` to keep every trial
// (indexable by trial number) for offline analysis.
inline EnsembleStats run_ensemble(const ArchitectureParams& arch, const ComplexMatrix& u,
                                  std::uint64_t master_seed, long long trials, int workers = 1,
                                  const ResourceCaps& caps = {},
                                  std::vector<TrialRecord>* records = nullptr) {
    if (trials < 1) throw std::invalid_argument("run_ensemble: trials must be >= 1");
    if (workers < 1) throw std::invalid_argument("run_ensemble: workers must be >= 1");
    if (records != nullptr) records->assign(static_cast<std::size_t>(trials), TrialRecord{});

    const int worker_count = static_cast<int>(std::min<long long>(workers, trials));
    std::vector<EnsembleStats> partial(worker_count);
    std::vector<std::exception_ptr> failures(worker_count);
    std::vector<std::thread> pool;
    pool.reserve(worker_count);

    auto work = [&](int w) {
        try {
            DistributionCache cache;  // worker-local; values are pure functions of the input
            const long long begin = trials * w / worker_count;
            const long long end = trials * (w + 1) / worker_count;
            for (long long i = begin; i < end; ++i) {
                RngStream rng(master_seed, static_cast<std::uint64_t>(i));
                TrialRecord rec = run_trial(arch, u, rng, caps, &cache);
                partial[w].absorb(rec);
                if (records != nullptr) (*records)[static_cast<std::size_t>(i)] = std::move(rec);
            }
        } catch (...) {
            failures[w] = std::current_exception();
        }
    };

    if (worker_count == 1) {
        work(0);
    } else {
        for (int w = 0; w < worker_count; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }

    EnsembleStats stats;
    for (const auto& p : partial) stats.merge(p);
    return stats;
}

}  // namespace spdcbs
