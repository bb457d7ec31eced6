#pragma once

#include <array>

// Frozen N = 9 reference lowpass taps (theta = 0), ascending powers of z,
// minimal phase, unit energy, largest tap positive. Generated by an
// independent Bauer factorization (banded Toeplitz Cholesky of the halfband
// residual symbol); internal certificates: symbol reconstruction 1.7e-18
// relative, energy defect 6.1e-17, lowpass sum defect vs sqrt(2) 1.9e-16.
namespace fixtures {

inline constexpr std::array<double, 18> kDb9Lowpass = {
    3.9347320316271603e-05,
    -0.00025196318894271012,
    0.00023038576352319597,
    0.0018476468830562263,
    -0.0042815036824634303,
    -0.0047232047577513989,
    0.022361662123679096,
    0.0002509471148314542,
    -0.067632829061329974,
    0.030725681479333383,
    0.14854074933810638,
    -0.096840783222976443,
    -0.29327378327917486,
    0.13319738582500762,
    0.65728807805130063,
    0.60482312369011115,
    0.24383467461259037,
    0.038077947363878345,
};

}  // namespace fixtures
