#include "phsw/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace phsw {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

int db_effective_levels(const ImageBuffer& image, int order_n, int requested) {
    return std::min(effective_levels(image.width, order_n, requested),
                    effective_levels(image.height, order_n, requested));
}

struct ForwardState {
    Method method;
    int levels_used = 0;
    std::uint32_t c_micro = 0;
    PhsdPyramid phsd;
    TensorPyramid db;
};

ForwardState run_forward(const ImageBuffer& image, const EncodeOptions& options,
                         const FilterCache& cache) {
    ForwardState st;
    st.method = options.method;
    if (options.method == Method::phsd) {
        st.c_micro = c_scale_to_micro(options.c_scale);
        Phsd2dParams params;
        params.order_n = options.order_n;
        params.levels = st.levels_used = effective_levels(image.width, options.order_n, options.levels);
        params.c_scale = c_scale_from_micro(st.c_micro);
        params.threads = options.threads;
        st.phsd = phsd_forward(image, params, cache);
    } else {
        st.levels_used = db_effective_levels(image, options.order_n, options.levels);
        st.db = tensor_forward(image, options.order_n, st.levels_used, cache);
    }
    return st;
}

// Threshold/keep -> quantize -> container -> reconstruct, from an already
// computed forward transform. `tau_override` replaces the options' threshold
// (used by the matched-PSNR search).
EncodeResult finish_encode(const ImageBuffer& image, const EncodeOptions& options,
                           const ForwardState& base, const FilterCache& cache,
                           const double* tau_override, Clock::time_point start) {
    EncodeResult result;
    result.levels_used = base.levels_used;
    ThresholdOutcome outcome;
    QuantizedStream qs;
    if (base.method == Method::phsd) {
        PhsdPyramid pyr = base.phsd;
        if (tau_override)
            outcome = apply_threshold(pyr, *tau_override);
        else if (options.keep)
            outcome = keep_largest(pyr, *options.keep);
        else
            outcome = apply_threshold(pyr, options.threshold.value_or(0.0));
        const double delta = options.step
                                 ? *options.step
                                 : default_delta(outcome.threshold, peak_modulus(pyr));
        qs = quantize(pyr, delta, image.bit_depth, base.c_micro);
        result.reconstruction = phsd_inverse(dequantize_phsd(qs), image.bit_depth, cache);
    } else {
        TensorPyramid pyr = base.db;
        if (tau_override)
            outcome = apply_threshold(pyr, *tau_override);
        else if (options.keep)
            outcome = keep_largest(pyr, *options.keep);
        else
            outcome = apply_threshold(pyr, options.threshold.value_or(0.0));
        const double delta = options.step
                                 ? *options.step
                                 : default_delta(outcome.threshold, peak_modulus(pyr));
        qs = quantize(pyr, delta, image.bit_depth);
        result.reconstruction = tensor_inverse(dequantize_tensor(qs), image.bit_depth, cache);
    }
    result.container = serialize(qs);
    result.report.method = base.method == Method::phsd ? "phsd" : "db";
    result.report.num_coeffs = outcome.retained;
    result.report.psnr_db = psnr(image, result.reconstruction);
    result.report.entropy_bits = total_entropy_bits(qs);
    result.report.bits_encoded = static_cast<std::int64_t>(result.container.size()) * 8;
    result.report.compression_ratio =
        static_cast<double>(image.width) * image.height * image.bit_depth /
        static_cast<double>(result.report.bits_encoded);
    result.report.threshold = outcome.threshold;
    result.report.runtime_ms = elapsed_ms(start);
    return result;
}

// PSNR of the reconstruction at threshold tau, skipping entropy coding.
double probe_psnr(const ImageBuffer& image, const EncodeOptions& options,
                  const ForwardState& base, const FilterCache& cache, double tau) {
    if (base.method == Method::phsd) {
        PhsdPyramid pyr = base.phsd;
        const ThresholdOutcome outcome = apply_threshold(pyr, tau);
        const double delta =
            options.step ? *options.step : default_delta(outcome.threshold, peak_modulus(pyr));
        const QuantizedStream qs = quantize(pyr, delta, image.bit_depth, base.c_micro);
        return psnr(image, phsd_inverse(dequantize_phsd(qs), image.bit_depth, cache));
    }
    TensorPyramid pyr = base.db;
    const ThresholdOutcome outcome = apply_threshold(pyr, tau);
    const double delta =
        options.step ? *options.step : default_delta(outcome.threshold, peak_modulus(pyr));
    const QuantizedStream qs = quantize(pyr, delta, image.bit_depth);
    return psnr(image, tensor_inverse(dequantize_tensor(qs), image.bit_depth, cache));
}

}  // namespace

ImageBuffer round_to_depth(const ImageBuffer& image) {
    ImageBuffer out = image;
    const double hi = out.max_value();
    for (double& s : out.samples) s = std::min(std::max(std::round(s), 0.0), hi);
    return out;
}

EncodeResult encode_image(const ImageBuffer& image, const EncodeOptions& options,
                          const FilterCache& cache) {
    if (options.threshold && options.keep)
        throw Error("threshold and keep are mutually exclusive");
    if (options.threshold && (!(*options.threshold >= 0.0) || std::isnan(*options.threshold)))
        throw Error("threshold must be nonnegative");
    if (options.step && !(*options.step > 0.0))
        throw Error("step must be positive");
    const auto start = Clock::now();
    const ForwardState base = run_forward(image, options, cache);
    return finish_encode(image, options, base, cache, nullptr, start);
}

ImageBuffer decode_image(const std::uint8_t* data, std::size_t size, const FilterCache& cache) {
    const QuantizedStream qs = deserialize(data, size);
    ImageBuffer real = qs.method == Method::phsd
                           ? phsd_inverse(dequantize_phsd(qs), qs.bit_depth, cache)
                           : tensor_inverse(dequantize_tensor(qs), qs.bit_depth, cache);
    return round_to_depth(real);
}

ImageBuffer decode_image(const std::vector<std::uint8_t>& bytes, const FilterCache& cache) {
    return decode_image(bytes.data(), bytes.size(), cache);
}

EncodeResult match_psnr_search(const ImageBuffer& image, const MatchOptions& options,
                               const FilterCache& cache) {
    EncodeOptions enc = options.encode;
    enc.threshold.reset();
    enc.keep.reset();
    const auto start = Clock::now();
    const ForwardState base = run_forward(image, enc, cache);
    const double target = options.target_psnr_db;
    const double tol = options.tolerance_db;
    const double max_mod = base.method == Method::phsd ? peak_modulus(base.phsd)
                                                       : peak_modulus(base.db);

    double best_tau = 0.0;
    double best_psnr = -std::numeric_limits<double>::infinity();
    auto consider = [&](double tau, double p) {
        if (std::abs(p - target) < std::abs(best_psnr - target)) {
            best_psnr = p;
            best_tau = tau;
        }
    };

    // tau = 0 switches to the unit quantizer; it is its own regime, checked
    // first so an exact hit returns the smallest possible threshold.
    const double p_zero = probe_psnr(image, enc, base, cache, 0.0);
    consider(0.0, p_zero);
    if (std::abs(p_zero - target) <= tol)
        return finish_encode(image, enc, base, cache, &best_tau, start);

    if (max_mod > 0.0) {
        // Bracket: tau_floor sits below every coefficient (finest PSNR the
        // tau/2 step rule can reach), tau_ceil above the largest (coarsest).
        const double tau_floor = max_mod * 0x1p-46;
        const double tau_ceil = max_mod * (1.0 + 1e-9);
        double lo = tau_floor;
        double p_lo = probe_psnr(image, enc, base, cache, lo);
        consider(lo, p_lo);
        double hi = tau_ceil;
        double p_hi = probe_psnr(image, enc, base, cache, hi);
        consider(hi, p_hi);

        if (p_lo >= target && p_hi <= target) {
            for (int iter = 0; iter < 60 && std::abs(best_psnr - target) > tol; ++iter) {
                const double mid = std::sqrt(lo * hi);
                const double p_mid = probe_psnr(image, enc, base, cache, mid);
                consider(mid, p_mid);
                if (p_mid >= target)
                    lo = mid;
                else
                    hi = mid;
            }
            if (std::abs(best_psnr - target) <= tol) {
                // Walk down to the smallest tau on the accepted plateau.
                double plateau_lo = tau_floor;
                double plateau_hi = best_tau;
                for (int iter = 0; iter < 30; ++iter) {
                    const double mid = std::sqrt(plateau_lo * plateau_hi);
                    const double p_mid = probe_psnr(image, enc, base, cache, mid);
                    if (std::abs(p_mid - best_psnr) <= 1e-9)
                        plateau_hi = mid;
                    else
                        plateau_lo = mid;
                }
                best_tau = plateau_hi;
            }
        }
    }

    if (std::abs(best_psnr - target) > tol)
        throw SearchFailure("matched-PSNR search missed " + std::to_string(target) +
                                " dB by more than " + std::to_string(tol) +
                                " dB (closest: " + std::to_string(best_psnr) + " dB)",
                            best_psnr);
    return finish_encode(image, enc, base, cache, &best_tau, start);
}

CompareOutcome run_compare(const ImageBuffer& image, const CompareOptions& options,
                           const FilterCache& cache) {
    EncodeOptions fixed;
    fixed.method = options.fixed;
    fixed.order_n = options.order_n;
    fixed.levels = options.levels;
    fixed.c_scale = options.c_scale;
    fixed.keep = options.keep;
    fixed.threads = options.threads;
    const EncodeResult fixed_result = encode_image(image, fixed, cache);

    MatchOptions match;
    match.target_psnr_db = fixed_result.report.psnr_db;
    match.tolerance_db = options.tolerance_db;
    match.encode = fixed;
    match.encode.keep.reset();
    match.encode.method = options.fixed == Method::phsd ? Method::db : Method::phsd;
    const EncodeResult matched_result = match_psnr_search(image, match, cache);

    CompareOutcome out;
    out.original = image;
    const bool fixed_is_phsd = options.fixed == Method::phsd;
    out.phsd = fixed_is_phsd ? fixed_result.report : matched_result.report;
    out.db = fixed_is_phsd ? matched_result.report : fixed_result.report;
    out.phsd_reconstruction =
        round_to_depth(fixed_is_phsd ? fixed_result.reconstruction : matched_result.reconstruction);
    out.db_reconstruction =
        round_to_depth(fixed_is_phsd ? matched_result.reconstruction : fixed_result.reconstruction);
    return out;
}

ImageBuffer difference_image(const ImageBuffer& reference, const ImageBuffer& test, double gain) {
    if (reference.width != test.width || reference.height != test.height)
        throw GeometryError("difference needs images of identical dimensions");
    ImageBuffer out(reference.width, reference.height, reference.bit_depth);
    const double hi = out.max_value();
    const double mid = (hi + 1.0) / 2.0;
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        const double v = mid + gain * (test.samples[i] - reference.samples[i]);
        out.samples[i] = std::min(std::max(std::round(v), 0.0), hi);
    }
    return out;
}

}  // namespace phsw
