#pragma once

#include <complex>
#include <vector>

#include "phsw/error.hpp"
#include "phsw/filter_bank.hpp"

namespace phsw {

// Multilevel circular analysis of one frequency row. Level ell (1-based, from
// the finest) uses the filter pair for theta_ell = min(theta_base * 2^{ell-1},
// kThetaMax); details[0] holds the finest level (length original_length / 2),
// details back() the coarsest, approx the final lowpass (length
// original_length / 2^levels).
struct FrequencyRowPyramid {
    int eta_index = 0;          // signed frequency index of the source row
    double theta_base = 0.0;    // level-1 theta before doubling and clamping
    int levels = 0;
    int original_length = 0;
    std::vector<std::complex<double>> approx;
    std::vector<std::vector<std::complex<double>>> details;
};

// Largest level count <= requested supported by a row of length `length` with
// filters of length 2 * order_n: every analyzed length must stay even and at
// least as long as the filter.
int effective_levels(int length, int order_n, int requested);

// One circular analysis step: splits `signal` (even length >= 2 * order_n,
// else GeometryError) into decimated approx/detail halves. The adjoint
// `synthesize_step` accumulates them back; the round trip is the identity
// because the pair is orthonormal under even circular shifts.
void analyze_step(const std::vector<std::complex<double>>& signal, const FilterPair& filters,
                  std::vector<std::complex<double>>& approx,
                  std::vector<std::complex<double>>& detail);
void synthesize_step(const std::vector<std::complex<double>>& approx,
                     const std::vector<std::complex<double>>& detail, const FilterPair& filters,
                     std::vector<std::complex<double>>& signal);

// Real-valued variants used by the tensor-product baseline.
void analyze_step(const std::vector<double>& signal, const FilterPair& filters,
                  std::vector<double>& approx, std::vector<double>& detail);
void synthesize_step(const std::vector<double>& approx, const std::vector<double>& detail,
                     const FilterPair& filters, std::vector<double>& signal);

// Full pyramid for one row. Throws GeometryError when `levels` does not fit
// (callers that want auto-reduction go through effective_levels first).
FrequencyRowPyramid analyze_row(const std::vector<std::complex<double>>& row, int eta_index,
                                double theta_base, int order_n, int levels,
                                const FilterCache& cache = default_filter_cache());
std::vector<std::complex<double>> synthesize_row(const FrequencyRowPyramid& pyramid, int order_n,
                                                 const FilterCache& cache = default_filter_cache());

}  // namespace phsw
