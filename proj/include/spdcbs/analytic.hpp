#pragma once

// Closed-form probabilities for a multiplexed-SPDC boson-sampling
// architecture: the source photon-number law, lossy number-resolving
// detection, heralding, parallel state preparation, post-selection, and the
// detector-efficiency bounds that connect them.

#include <cmath>
#include <stdexcept>
#include <string>

#include "spdcbs/errors.hpp"

namespace spdcbs {

// Photon-number series are truncated once the discarded geometric tail drops
// below this mass.
inline constexpr double kSeriesTailBound = 1e-12;

// One SPDC source. The photon-number law is geometric with ratio tanh^2(r),
// so the truncation order giving a tail below kSeriesTailBound has a closed
// form; use from_squeezing() to pick it.
struct SpdcParams {
    double r = 0.0;   // squeezing parameter, >= 0
    int s_max = 1;    // photon-number series truncation order, >= 1

    static SpdcParams from_squeezing(double r) {
        if (!(r >= 0.0)) {
            throw std::invalid_argument("SpdcParams: squeezing parameter r must be >= 0");
        }
        const double q = std::tanh(r) * std::tanh(r);
        int s_max = 1;
        if (q > 0.0) {
            // Tail mass past s_max is exactly q^(s_max + 1).
            s_max = static_cast<int>(std::ceil(std::log(kSeriesTailBound) / std::log(q))) - 1;
            s_max = std::max(s_max, 1);
            while (std::pow(q, s_max + 1) >= kSeriesTailBound) ++s_max;
        }
        return SpdcParams{r, s_max};
    }

    double pair_ratio() const { return std::tanh(r) * std::tanh(r); }  // tanh^2(r)
};

// Number-resolving detector with per-photon survival probability eta.
struct DetectorModel {
    double eta = 1.0;  // detection efficiency in [0, 1]
};

// Full multiplexed architecture: `sources` SPDC sources feeding a
// multiplexer that routes `photons` heralded modes into an interferometer
// with `modes` inputs.
struct ArchitectureParams {
    int photons = 1;  // n, required photon count
    int sources = 1;  // N, parallel SPDC sources, >= photons
    int modes = 1;    // m, interferometer modes, >= photons
    SpdcParams spdc;
    DetectorModel herald_detector;
    DetectorModel output_detector;
};

inline int default_mode_count(int photons) { return photons * photons; }

// Lower bounds used when solving for required detector efficiencies:
// epsilon bounds the post-selection success probability, epsilon_prime the
// probability that all heralds were correct.
struct ConfidenceBounds {
    double epsilon = 0.5;
    double epsilon_prime = 0.9;
};

namespace detail {

inline void check_efficiency(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("DetectorModel: efficiency eta must lie in [0, 1]");
    }
}

inline void check_squeezing(double r) {
    if (!(r >= 0.0)) {
        throw std::invalid_argument("SpdcParams: squeezing parameter r must be >= 0");
    }
}

// C(n, k) by the multiplicative rule; exact until the value itself outgrows
// the double mantissa.
inline double binomial_coefficient(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c *= static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return c;
}

inline double log_binomial_coefficient(long long n, long long k) {
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace detail

// P(source emits s pairs) = tanh^{2s}(r) / cosh^2(r).
inline double spdc_prob(const SpdcParams& source, int s) {
    detail::check_squeezing(source.r);
    if (s < 0) throw std::domain_error("spdc_prob: photon count s must be >= 0");
    const double cosh_r = std::cosh(source.r);
    return std::pow(source.pair_ratio(), s) / (cosh_r * cosh_r);
}

// P(detector reports t | s photons arrived) = C(s,t) eta^t (1-eta)^{s-t}.
// The detector never over-counts, so t must not exceed s.
inline double detector_prob(const DetectorModel& detector, int detected, int emitted) {
    detail::check_efficiency(detector.eta);
    if (detected < 0 || detected > emitted) {
        throw std::domain_error("detector_prob: requires 0 <= detected <= emitted");
    }
    const double eta = detector.eta;
    if (eta == 0.0) return detected == 0 ? 1.0 : 0.0;
    if (eta == 1.0) return detected == emitted ? 1.0 : 0.0;
    if (emitted <= 64) {
        return detail::binomial_coefficient(emitted, detected) *
               std::pow(eta, detected) * std::pow(1.0 - eta, emitted - detected);
    }
    // Large photon numbers: the coefficient alone overflows, so stay in logs.
    const double log_p = detail::log_binomial_coefficient(emitted, detected) +
                         detected * std::log(eta) +
                         (emitted - detected) * std::log1p(-eta);
    return std::exp(log_p);
}

// Probability of the herald detector reporting t photons, marginalized over
// the source distribution: sum_{s >= t} P_D(t|s) P_SPDC(s), truncated at
// s_max (discarded tail below kSeriesTailBound by the SpdcParams invariant).
inline double herald_prob(const SpdcParams& source, const DetectorModel& detector, int detected) {
    if (detected < 0) throw std::domain_error("herald_prob: detected count must be >= 0");
    const int upper = std::max(source.s_max, detected);
    double total = 0.0;
    for (int s = detected; s <= upper; ++s) {
        total += detector_prob(detector, detected, s) * spdc_prob(source, s);
    }
    return total;
}

// Same quantity resummed as a geometric series:
//   eta^t q^t / (cosh^2(r) (1 - (1-eta) q)^{t+1}),  q = tanh^2(r).
// Kept as an independent route for validating the truncated series.
inline double herald_prob_closed(const SpdcParams& source, const DetectorModel& detector,
                                 int detected) {
    detail::check_squeezing(source.r);
    detail::check_efficiency(detector.eta);
    if (detected < 0) throw std::domain_error("herald_prob_closed: detected count must be >= 0");
    const double q = source.pair_ratio();
    const double cosh_r = std::cosh(source.r);
    const double damped = 1.0 - (1.0 - detector.eta) * q;
    return std::pow(detector.eta * q, detected) /
           (cosh_r * cosh_r * std::pow(damped, detected + 1));
}

// P(X >= threshold) for X ~ Binomial(trials, p), evaluated in log space.
// The smaller of the two tails is summed and complemented if needed, which
// keeps the result stable out to trials ~ 10^6.
inline double binomial_upper_tail(long long trials, long long threshold, double p) {
    if (threshold <= 0) return 1.0;
    if (threshold > trials) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;

    const double log_p = std::log(p);
    const double log_1mp = std::log1p(-p);
    auto log_term = [&](long long i) {
        return detail::log_binomial_coefficient(trials, i) +
               static_cast<double>(i) * log_p + static_cast<double>(trials - i) * log_1mp;
    };
    const double odds = p / (1.0 - p);

    if (static_cast<double>(threshold) > static_cast<double>(trials) * p) {
        // Upper tail is the small side; terms decrease strictly from i = threshold.
        const double log_first = log_term(threshold);
        double rel = 1.0, sum = 1.0;
        for (long long i = threshold; i < trials; ++i) {
            rel *= static_cast<double>(trials - i) / static_cast<double>(i + 1) * odds;
            sum += rel;
            if (rel < 1e-18 * sum) break;
        }
        return std::exp(log_first + std::log(sum));
    }
    // Lower tail is the small side; its largest term sits at i = threshold - 1.
    const double log_first = log_term(threshold - 1);
    double rel = 1.0, sum = 1.0;
    for (long long i = threshold - 1; i > 0; --i) {
        rel *= static_cast<double>(i) * (1.0 - p) / (static_cast<double>(trials - i + 1) * p);
        sum += rel;
        if (rel < 1e-18 * sum) break;
    }
    const double lower = std::exp(log_first + std::log(sum));
    return lower >= 1.0 ? 0.0 : 1.0 - lower;
}

// Probability that at least `photons` of the `sources` parallel SPDC sources
// herald exactly one photon.
inline double prep_prob(const ArchitectureParams& arch) {
    if (arch.photons < 0) throw std::domain_error("prep_prob: photon count must be >= 0");
    if (arch.sources < arch.photons) {
        throw std::domain_error("prep_prob: requires sources N >= photons n");
    }
    if (arch.photons == 0) return 1.0;
    const double p = herald_prob(arch.spdc, arch.herald_detector, 1);
    return binomial_upper_tail(arch.sources, arch.photons, p);
}

// Probability that all n photons survive output detection: eta^n.
inline double post_select_prob(int photons, const DetectorModel& detector) {
    detail::check_efficiency(detector.eta);
    if (photons < 0) throw std::domain_error("post_select_prob: photon count must be >= 0");
    return std::pow(detector.eta, static_cast<double>(photons));
}

// Posterior probability that the source emitted s pairs given the herald
// reported t, by Bayes' rule over the truncated series.
inline double corr_prob(const SpdcParams& source, const DetectorModel& detector,
                        int emitted, int detected) {
    if (detected < 0 || emitted < detected) {
        throw std::domain_error("corr_prob: requires emitted s >= detected t >= 0");
    }
    const double marginal = herald_prob(source, detector, detected);
    if (marginal <= 0.0) {
        throw UndefinedPosterior(
            "corr_prob: herald outcome has zero probability, posterior undefined");
    }
    return detector_prob(detector, detected, emitted) * spdc_prob(source, emitted) / marginal;
}

// Probability that n parallel heralds are all genuine single pairs. The
// single-source posterior has the closed form [1 - (1-eta) tanh^2 r]^2, so
// the n-fold product is its nth power.
inline double par_prob(int photons, const SpdcParams& source, const DetectorModel& detector) {
    detail::check_squeezing(source.r);
    detail::check_efficiency(detector.eta);
    if (photons < 1) throw std::domain_error("par_prob: photon count must be >= 1");
    const double base = 1.0 - (1.0 - detector.eta) * source.pair_ratio();
    return std::pow(base, 2.0 * photons);
}

// Smallest detector efficiency for which post-selection succeeds with
// probability at least epsilon: the nth root of epsilon.
inline double eta_for_post(int photons, const ConfidenceBounds& bounds) {
    if (photons < 1) throw std::domain_error("eta_for_post: photon count must be >= 1");
    if (!(bounds.epsilon > 0.0 && bounds.epsilon <= 1.0)) {
        throw std::invalid_argument("eta_for_post: epsilon must lie in (0, 1]");
    }
    return std::pow(bounds.epsilon, 1.0 / photons);
}

// Heralding correctness when every detector runs at the efficiency that just
// meets the post-selection bound: [1 + (epsilon^{1/n} - 1) tanh^2 r]^{2n}.
inline double par_prob_bounded(int photons, const SpdcParams& source,
                               const ConfidenceBounds& bounds) {
    detail::check_squeezing(source.r);
    if (photons < 1) throw std::domain_error("par_prob_bounded: photon count must be >= 1");
    if (!(bounds.epsilon > 0.0 && bounds.epsilon <= 1.0)) {
        throw std::invalid_argument("par_prob_bounded: epsilon must lie in (0, 1]");
    }
    const double root = std::pow(bounds.epsilon, 1.0 / photons);
    const double base = 1.0 + (root - 1.0) * source.pair_ratio();
    return std::pow(base, 2.0 * photons);
}

// Large-n limit of par_prob_bounded: epsilon^{2 tanh^2 r}.
inline double par_prob_limit(const SpdcParams& source, const ConfidenceBounds& bounds) {
    detail::check_squeezing(source.r);
    if (!(bounds.epsilon > 0.0 && bounds.epsilon <= 1.0)) {
        throw std::invalid_argument("par_prob_limit: epsilon must lie in (0, 1]");
    }
    return std::pow(bounds.epsilon, 2.0 * source.pair_ratio());
}

// Detector efficiency needed so that n parallel heralds are all correct with
// probability at least epsilon_prime: 1 + (epsilon_prime^{1/2n} - 1) coth^2 r.
// Small squeezing can push the requirement below zero, in which case no
// detector satisfies it and InfeasibleRegime carries the raw value.
inline double eta_from_fidelity(int photons, const SpdcParams& source,
                                const ConfidenceBounds& bounds) {
    if (photons < 1) throw std::domain_error("eta_from_fidelity: photon count must be >= 1");
    if (!(bounds.epsilon_prime > 0.0 && bounds.epsilon_prime <= 1.0)) {
        throw std::invalid_argument("eta_from_fidelity: epsilon_prime must lie in (0, 1]");
    }
    detail::check_squeezing(source.r);
    if (source.r == 0.0) {
        throw std::domain_error("eta_from_fidelity: coth^2(r) is singular at r = 0");
    }
    const double tanh_r = std::tanh(source.r);
    const double coth_sq = 1.0 / (tanh_r * tanh_r);
    const double root = std::pow(bounds.epsilon_prime, 1.0 / (2.0 * photons));
    const double eta = 1.0 + (root - 1.0) * coth_sq;
    if (eta < 0.0) {
        throw InfeasibleRegime(
            eta, "eta_from_fidelity: required efficiency " + std::to_string(eta) +
                     " is below zero; no detector meets the heralding-fidelity bound");
    }
    return eta;
}

// Post-selection probability when detectors run at the fidelity-derived
// efficiency: [1 + (epsilon_prime^{1/2n} - 1) coth^2 r]^n.
inline double post_prob_given_fidelity(int photons, const SpdcParams& source,
                                       const ConfidenceBounds& bounds) {
    if (photons < 1) {
        throw std::domain_error("post_prob_given_fidelity: photon count must be >= 1");
    }
    if (!(bounds.epsilon_prime > 0.0 && bounds.epsilon_prime <= 1.0)) {
        throw std::invalid_argument("post_prob_given_fidelity: epsilon_prime must lie in (0, 1]");
    }
    detail::check_squeezing(source.r);
    if (source.r == 0.0) {
        throw std::domain_error("post_prob_given_fidelity: coth^2(r) is singular at r = 0");
    }
    const double tanh_r = std::tanh(source.r);
    const double coth_sq = 1.0 / (tanh_r * tanh_r);
    const double root = std::pow(bounds.epsilon_prime, 1.0 / (2.0 * photons));
    const double eta = 1.0 + (root - 1.0) * coth_sq;
    if (eta < 0.0) {
        throw InfeasibleRegime(
            eta, "post_prob_given_fidelity: required efficiency " + std::to_string(eta) +
                     " is below zero; no detector meets the heralding-fidelity bound");
    }
    return std::pow(eta, static_cast<double>(photons));
}

}  // namespace spdcbs
