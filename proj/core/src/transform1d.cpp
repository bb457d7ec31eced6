#include "phsw/transform1d.hpp"

#include <algorithm>
#include <cmath>

namespace phsw {
namespace {

template <typename T>
void analyze_impl(const std::vector<T>& signal, const FilterPair& filters, std::vector<T>& approx,
                  std::vector<T>& detail) {
    const int length = static_cast<int>(signal.size());
    const int taps = static_cast<int>(filters.lowpass.size());
    if (length < taps || length % 2 != 0)
        throw GeometryError("analysis step needs an even signal length >= " +
                            std::to_string(taps) + ", got " + std::to_string(length));
    const int half = length / 2;
    approx.assign(half, T{});
    detail.assign(half, T{});
    for (int m = 0; m < half; ++m) {
        T sum_a{};
        T sum_d{};
        int idx = 2 * m;
        for (int j = 0; j < taps; ++j) {
            const T& x = signal[idx];
            sum_a += x * filters.lowpass[j];
            sum_d += x * filters.highpass[j];
            if (++idx == length) idx = 0;
        }
        approx[m] = sum_a;
        detail[m] = sum_d;
    }
}

template <typename T>
void synthesize_impl(const std::vector<T>& approx, const std::vector<T>& detail,
                     const FilterPair& filters, std::vector<T>& signal) {
    const int half = static_cast<int>(approx.size());
    const int taps = static_cast<int>(filters.lowpass.size());
    const int length = 2 * half;
    if (detail.size() != approx.size())
        throw GeometryError("approx/detail length mismatch in synthesis");
    if (length < taps)
        throw GeometryError("synthesis step needs 2*approx length >= filter length");
    signal.assign(length, T{});
    for (int m = 0; m < half; ++m) {
        const T& a = approx[m];
        const T& d = detail[m];
        int idx = 2 * m;
        for (int j = 0; j < taps; ++j) {
            signal[idx] += a * filters.lowpass[j] + d * filters.highpass[j];
            if (++idx == length) idx = 0;
        }
    }
}

double level_theta(double theta_base, int level) {
    return std::min(theta_base * std::exp2(level - 1), kThetaMax);
}

}  // namespace

int effective_levels(int length, int order_n, int requested) {
    int levels = 0;
    int len = length;
    while (levels < requested && len % 2 == 0 && len / 2 >= 2 * order_n) {
        len /= 2;
        ++levels;
    }
    return levels;
}

void analyze_step(const std::vector<std::complex<double>>& signal, const FilterPair& filters,
                  std::vector<std::complex<double>>& approx,
                  std::vector<std::complex<double>>& detail) {
    analyze_impl(signal, filters, approx, detail);
}

void synthesize_step(const std::vector<std::complex<double>>& approx,
                     const std::vector<std::complex<double>>& detail, const FilterPair& filters,
                     std::vector<std::complex<double>>& signal) {
    synthesize_impl(approx, detail, filters, signal);
}

void analyze_step(const std::vector<double>& signal, const FilterPair& filters,
                  std::vector<double>& approx, std::vector<double>& detail) {
    analyze_impl(signal, filters, approx, detail);
}

void synthesize_step(const std::vector<double>& approx, const std::vector<double>& detail,
                     const FilterPair& filters, std::vector<double>& signal) {
    synthesize_impl(approx, detail, filters, signal);
}

FrequencyRowPyramid analyze_row(const std::vector<std::complex<double>>& row, int eta_index,
                                double theta_base, int order_n, int levels,
                                const FilterCache& cache) {
    if (levels < 0) throw GeometryError("levels must be nonnegative");
    const int length = static_cast<int>(row.size());
    if (effective_levels(length, order_n, levels) < levels)
        throw GeometryError("length " + std::to_string(length) + " cannot support " +
                            std::to_string(levels) + " levels at order " + std::to_string(order_n));
    FrequencyRowPyramid pyr;
    pyr.eta_index = eta_index;
    pyr.theta_base = theta_base;
    pyr.levels = levels;
    pyr.original_length = length;
    pyr.details.reserve(levels);
    std::vector<std::complex<double>> current = row;
    std::vector<std::complex<double>> approx, detail;
    for (int ell = 1; ell <= levels; ++ell) {
        const auto filters = cache.get(level_theta(theta_base, ell), order_n);
        analyze_step(current, *filters, approx, detail);
        pyr.details.push_back(detail);
        current = std::move(approx);
        approx.clear();
    }
    pyr.approx = std::move(current);
    return pyr;
}

std::vector<std::complex<double>> synthesize_row(const FrequencyRowPyramid& pyramid, int order_n,
                                                 const FilterCache& cache) {
    if (static_cast<int>(pyramid.details.size()) != pyramid.levels)
        throw GeometryError("pyramid level count does not match its detail bands");
    std::vector<std::complex<double>> current = pyramid.approx;
    std::vector<std::complex<double>> next;
    for (int ell = pyramid.levels; ell >= 1; --ell) {
        const auto filters = cache.get(level_theta(pyramid.theta_base, ell), order_n);
        synthesize_step(current, pyramid.details[ell - 1], *filters, next);
        current = std::move(next);
        next.clear();
    }
    if (static_cast<int>(current.size()) != pyramid.original_length)
        throw GeometryError("synthesized length does not match the pyramid's original length");
    return current;
}

}  // namespace phsw
