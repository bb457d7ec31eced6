#include "phsw/filter_bank.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <mutex>

namespace phsw {
namespace {

using Real = long double;
using CReal = std::complex<Real>;
using MatrixR = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

// Cofactor of the half-band Bezout identity (1-y)^n B(y) + y^n B(1-y) = 1:
// B(y) = sum_{k<n} C(n-1+k, k) y^k, the unique solution of degree < n.
std::vector<Real> bezout_cofactor(int n) {
    std::vector<Real> b(static_cast<std::size_t>(n));
    b[0] = 1.0L;
    for (int k = 1; k < n; ++k)
        b[k] = b[k - 1] * static_cast<Real>(n - 1 + k) / static_cast<Real>(k);
    return b;
}

std::vector<CReal> companion_roots(const std::vector<Real>& poly) {
    const int deg = static_cast<int>(poly.size()) - 1;
    std::vector<CReal> roots;
    if (deg <= 0) return roots;
    MatrixR comp = MatrixR::Zero(deg, deg);
    for (int i = 0; i < deg; ++i) {
        comp(i, deg - 1) = -poly[i] / poly[deg];
        if (i + 1 < deg) comp(i + 1, i) = 1.0L;
    }
    Eigen::EigenSolver<MatrixR> es(comp, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw ConditioningFailure("cofactor eigensolve failed");
    for (int i = 0; i < deg; ++i) roots.push_back(es.eigenvalues()(i));
    return roots;
}

// A few Newton steps to push an eigenvalue estimate onto the polynomial root;
// returns the final relative step size as an accuracy proxy.
Real polish_root(const std::vector<Real>& poly, CReal& r) {
    Real last_step = 0.0L;
    for (int it = 0; it < 4; ++it) {
        CReal p(poly.back(), 0.0L);
        CReal dp(0.0L, 0.0L);
        for (std::size_t k = poly.size() - 1; k-- > 0;) {
            dp = dp * r + p;
            p = p * r + CReal(poly[k], 0.0L);
        }
        if (std::abs(dp) == 0.0L) break;
        const CReal step = p / dp;
        r -= step;
        last_step = std::abs(step) / (1.0L + std::abs(r));
        if (last_step <= 1e-22L) break;
    }
    return last_step;
}

void mul_linear(std::vector<Real>& poly, Real c0) {
    // poly *= (c0 + z)
    std::vector<Real> out(poly.size() + 1, 0.0L);
    for (std::size_t i = 0; i < poly.size(); ++i) {
        out[i] += poly[i] * c0;
        out[i + 1] += poly[i];
    }
    poly = std::move(out);
}

void mul_quadratic(std::vector<Real>& poly, Real c0, Real c1) {
    // poly *= (c0 + c1 z + z^2)
    std::vector<Real> out(poly.size() + 2, 0.0L);
    for (std::size_t i = 0; i < poly.size(); ++i) {
        out[i] += poly[i] * c0;
        out[i + 1] += poly[i] * c1;
        out[i + 2] += poly[i];
    }
    poly = std::move(out);
}

}  // namespace

FilterPair build_filter_pair(double theta, int order_n) {
    if (order_n < 1 || order_n > kMaxOrder)
        throw InvalidOrder("order_n must lie in [1, " + std::to_string(kMaxOrder) + "], got " +
                           std::to_string(order_n));
    if (!(theta >= 0.0)) throw Error("theta must be a nonnegative number");
    if (theta > kThetaMax) theta = kThetaMax;

    const int n = order_n;
    const Real th = static_cast<Real>(theta);
    const Real c = std::cosh(th);

    // Half-band symbol in x = z + 1/z: the n-fold reproduction zero pair
    // z = -e^{+-theta} is the single n-fold root x0 = -2c, and the identity
    // (x + 2c)^n S(x) + (2c - x)^n S(-x) = 2 pins the spurious factor to
    // S(x) = 2 B(y) / (4c)^n under y = (2c - x) / (4c). The substitution
    // carries the classical Bezout cofactor across the whole theta range, so
    // the spurious roots are x_j = 2c (1 - 2 y_j) for the fixed roots y_j of
    // B. No numerical deflation is ever needed.
    const std::vector<Real> bez = bezout_cofactor(n);
    std::vector<CReal> yroots = companion_roots(bez);

    // Minimal-phase factor: the n-fold zero at -e^{-theta} plus, per spurious
    // reciprocal pair z^2 - x_j z + 1, the member inside the unit disk. The
    // small member is recovered as 1/z_big; forming it by subtraction would
    // cancel catastrophically once |x_j| ~ e^{theta}.
    std::vector<Real> a = {1.0L};
    for (int k = 0; k < n; ++k) mul_linear(a, std::exp(-th));

    Real root_residual = 0.0L;
    for (CReal& y : yroots) {
        root_residual = std::max(root_residual, polish_root(bez, y));
        const Real im_tol = 1e-9L * (1.0L + std::abs(y));
        if (std::abs(y.imag()) <= im_tol) {
            const Real yr = y.real();
            // B has positive coefficients, so real roots are negative and the
            // corresponding x = 2c(1 - 2y) > 2c >= 2 sits off the unit circle.
            if (yr >= 0.0L)
                throw ConditioningFailure("cofactor root on the nonnegative axis");
            const Real x = 2.0L * c * (1.0L - 2.0L * yr);
            const Real zbig = (x + std::sqrt(x * x - 4.0L)) / 2.0L;
            mul_linear(a, -1.0L / zbig);
        } else if (y.imag() > 0.0L) {
            const CReal x = 2.0L * c * (CReal(1.0L, 0.0L) - 2.0L * y);
            CReal disc = std::sqrt(x * x - CReal(4.0L, 0.0L));
            if ((disc * std::conj(x)).real() < 0.0L) disc = -disc;
            const CReal zbig = (x + disc) / CReal(2.0L, 0.0L);
            const CReal zsmall = CReal(1.0L, 0.0L) / zbig;
            // The conjugate y-root contributes the conjugate z, so fold the
            // pair into one real quadratic.
            mul_quadratic(a, std::norm(zsmall), -2.0L * zsmall.real());
        }
    }

    if (a.size() != static_cast<std::size_t>(2 * n))
        throw ConditioningFailure("spectral factor has unexpected length");

    Real energy = 0.0L;
    for (const Real& v : a) energy += v * v;
    const Real scale = 1.0L / std::sqrt(energy);
    for (Real& v : a) v *= scale;

    std::size_t imax = 0;
    for (std::size_t k = 1; k < a.size(); ++k)
        if (std::abs(a[k]) > std::abs(a[imax])) imax = k;
    if (a[imax] < 0.0L)
        for (Real& v : a) v = -v;

    FilterPair fp;
    fp.theta = static_cast<double>(th);
    fp.order_n = n;
    fp.lowpass.resize(2 * n);
    for (int k = 0; k < 2 * n; ++k) fp.lowpass[k] = static_cast<double>(a[k]);
    fp.highpass.resize(2 * n);
    for (int j = 0; j < 2 * n; ++j) {
        const double v = fp.lowpass[2 * n - 1 - j];
        fp.highpass[j] = (j % 2 == 0) ? v : -v;
    }

    // Conditioning diagnostic: double-shift autocorrelation of the stored taps
    // against the half-band ideal, plus the final Newton step of the root
    // polish.
    Real qmf = 0.0L;
    for (int m = 0; m < n; ++m) {
        Real acc = 0.0L;
        for (int k = 0; k + 2 * m < 2 * n; ++k)
            acc += static_cast<Real>(fp.lowpass[k]) * static_cast<Real>(fp.lowpass[k + 2 * m]);
        if (m == 0) acc -= 1.0L;
        qmf = std::max(qmf, std::abs(acc));
    }
    fp.condition_estimate = static_cast<double>(std::max(qmf, root_residual));
    if (fp.condition_estimate > 1e-10)
        throw ConditioningFailure("factorization residual " +
                                  std::to_string(fp.condition_estimate) + " exceeds 1e-10 at theta=" +
                                  std::to_string(static_cast<double>(th)) + ", n=" + std::to_string(n));
    return fp;
}

std::shared_ptr<const FilterPair> FilterCache::get(double theta, int order_n) const {
    if (!(theta >= 0.0)) throw Error("theta must be a nonnegative number");
    const double clamped = std::min(theta, kThetaMax);
    const std::int64_t key = std::llround(clamped / quantum_);
    const auto map_key = std::make_pair(key, order_n);
    {
        std::shared_lock lock(mutex_);
        auto it = cache_.find(map_key);
        if (it != cache_.end()) return it->second;
    }
    auto built = std::make_shared<const FilterPair>(
        build_filter_pair(static_cast<double>(key) * quantum_, order_n));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = cache_.emplace(map_key, std::move(built));
    return it->second;
}

std::size_t FilterCache::size() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
}

std::vector<std::shared_ptr<const FilterPair>> FilterCache::snapshot() const {
    std::shared_lock lock(mutex_);
    std::vector<std::shared_ptr<const FilterPair>> out;
    out.reserve(cache_.size());
    for (const auto& [key, value] : cache_) out.push_back(value);
    return out;
}

FilterCache& default_filter_cache() {
    static FilterCache cache;
    return cache;
}

void write_filter_table_csv(std::ostream& out,
                            const std::vector<std::shared_ptr<const FilterPair>>& pairs) {
    out << "theta,order_n,tap_index,lowpass,highpass\n";
    char buf[64];
    for (const auto& fp : pairs) {
        for (std::size_t k = 0; k < fp->lowpass.size(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", fp->theta);
            out << buf << ',' << fp->order_n << ',' << k << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", fp->lowpass[k]);
            out << buf << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", fp->highpass[k]);
            out << buf << '\n';
        }
    }
}

}  // namespace phsw
