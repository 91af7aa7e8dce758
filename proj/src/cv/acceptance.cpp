// Copyright 2026 The qmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmeas/cv/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qmeas/errors.hpp"

namespace qmeas::cv {

namespace {

constexpr double kNormTol = 1e-8;

// Cubic Lagrange interpolation of samples at integer nodes, with `at(k)` supplying the
// (possibly extended) sample at node k.
template <typename At>
double interp4(double t, At at) {
    const int k = static_cast<int>(std::floor(t));
    const double xi = t - k;
    const double v0 = at(k - 1);
    const double v1 = at(k);
    const double v2 = at(k + 1);
    const double v3 = at(k + 2);
    return v0 * (-xi * (xi - 1.0) * (xi - 2.0) / 6.0) + v1 * ((xi + 1.0) * (xi - 1.0) * (xi - 2.0) / 2.0) +
           v2 * (-(xi + 1.0) * xi * (xi - 2.0) / 2.0) + v3 * ((xi + 1.0) * xi * (xi - 1.0) / 6.0);
}

double lagrange_at(const double *nodes, const double *vals, int count, double x) {
    double s = 0.0;
    for (int a = 0; a < count; ++a) {
        double l = 1.0;
        for (int b = 0; b < count; ++b) {
            if (b != a) {
                l *= (x - nodes[b]) / (nodes[a] - nodes[b]);
            }
        }
        s += l * vals[a];
    }
    return s;
}

}  // namespace

AcceptanceProfile AcceptanceProfile::gaussian(double sigma_x) {
    if (!(sigma_x > 0.0) || !std::isfinite(sigma_x)) {
        throw DomainError("AcceptanceProfile::gaussian: sigma_x must be positive");
    }
    AcceptanceProfile p;
    p.kind_ = Kind::gaussian;
    p.p0_ = sigma_x;
    return p;
}

AcceptanceProfile AcceptanceProfile::smoothed_square(double alpha, double b) {
    if (!(alpha > 0.0) || !(b > 0.0) || !std::isfinite(alpha) || !std::isfinite(b)) {
        throw DomainError("AcceptanceProfile::smoothed_square: alpha and b must be positive");
    }
    const double ab = alpha * b;
    if (ab < 1e-2 || ab > 700.0) {
        throw DomainError("AcceptanceProfile::smoothed_square: alpha*b must lie in [0.01, 700]");
    }
    AcceptanceProfile p;
    p.kind_ = Kind::smoothed_square;
    p.p0_ = alpha;
    p.p1_ = b;
    const double coth = 1.0 / std::tanh(ab);
    p.scale_ = std::sqrt(alpha / (2.0 * coth * coth * (ab * coth - 1.0)));
    const double norm = p.quadrature(20001).norm;
    if (std::abs(norm - 1.0) > kNormTol) {
        throw InvariantError("AcceptanceProfile::smoothed_square: non-normalized profile (norm " +
                             std::to_string(norm) + ")");
    }
    return p;
}

AcceptanceProfile AcceptanceProfile::tabulated(std::vector<double> samples, double half_width) {
    const int m = static_cast<int>(samples.size());
    if (m < 9 || m % 2 == 0) {
        throw InvariantError("AcceptanceProfile::tabulated: need an odd number (>= 9) of samples");
    }
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw InvariantError("AcceptanceProfile::tabulated: half_width must be positive");
    }
    double peak = 0.0;
    for (double s : samples) {
        if (!std::isfinite(s)) {
            throw InvariantError("AcceptanceProfile::tabulated: non-finite sample");
        }
        peak = std::max(peak, std::abs(s));
    }
    if (peak == 0.0) {
        throw InvariantError("AcceptanceProfile::tabulated: profile is identically zero");
    }
    const int c = (m - 1) / 2;
    for (int k = 1; k <= c; ++k) {
        if (std::abs(samples[c + k] - samples[c - k]) > 1e-12 * peak) {
            throw InvariantError("AcceptanceProfile::tabulated: profile is not even (f(u) != f(-u))");
        }
    }

    AcceptanceProfile p;
    p.kind_ = Kind::tabulated;
    p.h_ = half_width / c;
    p.half_.assign(samples.begin() + c, samples.end());
    const int mh = c + 1;
    double norm = p.half_[0] * p.half_[0] + p.half_[mh - 1] * p.half_[mh - 1];
    for (int k = 1; k < mh - 1; ++k) {
        norm += 2.0 * p.half_[k] * p.half_[k];
    }
    norm *= p.h_;
    const double rescale = 1.0 / std::sqrt(norm);
    for (double &v : p.half_) {
        v *= rescale;
    }
    const auto at = [&p, mh](int k) {
        k = std::abs(k);
        return k < mh ? p.half_[k] : 0.0;
    };
    p.half_deriv_.resize(mh);
    for (int k = 0; k < mh; ++k) {
        p.half_deriv_[k] = (at(k - 2) - 8.0 * at(k - 1) + 8.0 * at(k + 1) - at(k + 2)) / (12.0 * p.h_);
    }
    return p;
}

AcceptanceProfile AcceptanceProfile::from_function(const std::function<double(double)> &fn,
                                                   double half_width, int m) {
    if (m % 2 == 0) {
        ++m;
    }
    std::vector<double> s(m);
    const int c = (m - 1) / 2;
    const double h = half_width / c;
    for (int k = 0; k <= c; ++k) {
        const double v = fn(k * h);
        s[c + k] = v;
        s[c - k] = v;
    }
    // Check the caller's function for evenness rather than silently symmetrising it.
    for (int k = 1; k <= c; k += std::max(1, c / 64)) {
        const double a = fn(k * h);
        const double b = fn(-k * h);
        if (std::abs(a - b) > 1e-12 * std::max({1e-300, std::abs(a), std::abs(b)})) {
            throw InvariantError("AcceptanceProfile::from_function: profile is not even");
        }
    }
    return tabulated(std::move(s), half_width);
}

std::string AcceptanceProfile::name() const {
    std::ostringstream os;
    os.precision(6);
    switch (kind_) {
        case Kind::gaussian:
            os << "gaussian(sigma_x=" << p0_ << ")";
            break;
        case Kind::smoothed_square:
            os << "smoothed_square(alpha=" << p0_ << ",b=" << p1_ << ")";
            break;
        case Kind::tabulated:
            os << "tabulated(n=" << 2 * half_.size() - 1 << ",half_width=" << h_ * (half_.size() - 1)
               << ")";
            break;
    }
    return os.str();
}

double AcceptanceProfile::table_value(double u) const {
    const int mh = static_cast<int>(half_.size());
    const double t = std::abs(u) / h_;
    if (t > mh - 1) {
        return 0.0;
    }
    return interp4(t, [this, mh](int k) {
        k = std::abs(k);
        return k < mh ? half_[k] : 0.0;
    });
}

double AcceptanceProfile::value(double u) const {
    switch (kind_) {
        case Kind::gaussian: {
            const double s = p0_;
            return std::pow(s * std::sqrt(2.0 * std::numbers::pi), -0.5) * std::exp(-u * u / (4.0 * s * s));
        }
        case Kind::smoothed_square: {
            // s·cosh(αb)/(cosh(αb) + cosh(αu)) written with t = e^{−α|u|} to avoid overflow.
            const double t = std::exp(-p0_ * std::abs(u));
            const double cb = std::cosh(p0_ * p1_);
            return scale_ * cb * 2.0 * t / (2.0 * cb * t + 1.0 + t * t);
        }
        case Kind::tabulated:
            return table_value(u);
    }
    return 0.0;
}

double AcceptanceProfile::derivative(double u) const {
    switch (kind_) {
        case Kind::gaussian:
            return -u / (2.0 * p0_ * p0_) * value(u);
        case Kind::smoothed_square: {
            const double t = std::exp(-p0_ * std::abs(u));
            const double cb = std::cosh(p0_ * p1_);
            const double den = 2.0 * cb * t + 1.0 + t * t;
            const double mag = scale_ * cb * p0_ * 2.0 * t * (1.0 - t * t) / (den * den);
            return u > 0.0 ? -mag : (u < 0.0 ? mag : 0.0);
        }
        case Kind::tabulated: {
            const int mh = static_cast<int>(half_deriv_.size());
            const double t = std::abs(u) / h_;
            if (t > mh - 1) {
                return 0.0;
            }
            const double d = interp4(t, [this, mh](int k) {
                const double sgn = k < 0 ? -1.0 : 1.0;
                k = std::abs(k);
                return k < mh ? sgn * half_deriv_[k] : 0.0;
            });
            return u < 0.0 ? -d : d;
        }
    }
    return 0.0;
}

double AcceptanceProfile::ss_autocorrelation_raw(double u) const {
    const double a = p0_;
    const double b = p1_;
    const double ab = a * b;
    const double pref = a * std::sinh(ab) / (2.0 * (ab / std::tanh(ab) - 1.0));
    const double sa = std::sinh(a * (b + 0.5 * u));
    const double sb = std::sinh(a * (b - 0.5 * u));
    const double sc = std::sinh(0.5 * a * u);
    return pref / sc * ((b - 0.5 * u) / sb - (b + 0.5 * u) / sa);
}

double AcceptanceProfile::autocorrelation(double u) const {
    switch (kind_) {
        case Kind::gaussian:
            return std::exp(-u * u / (8.0 * p0_ * p0_));
        case Kind::smoothed_square: {
            u = std::abs(u);
            if (0.5 * p0_ * u > 700.0) {
                return 0.0;
            }
            // Removable singularities at u = 0 and u = 2b: interpolate from nearby points.
            const double delta = 1e-3 / p0_;
            for (double centre : {0.0, 2.0 * p1_}) {
                if (std::abs(u - centre) < 2.0 * delta) {
                    const double nodes[4] = {centre - 2.0 * delta, centre - delta, centre + delta,
                                             centre + 2.0 * delta};
                    double vals[4];
                    for (int q = 0; q < 4; ++q) {
                        vals[q] = ss_autocorrelation_raw(std::abs(nodes[q]));
                    }
                    return lagrange_at(nodes, vals, 4, u);
                }
            }
            return ss_autocorrelation_raw(u);
        }
        case Kind::tabulated: {
            const int mh = static_cast<int>(half_.size());
            const double big_u = h_ * (mh - 1);
            if (std::abs(u) >= 2.0 * big_u) {
                return 0.0;
            }
            double s = 0.0;
            for (int k = -(mh - 1); k <= mh - 1; ++k) {
                const double w = (std::abs(k) == mh - 1) ? 0.5 : 1.0;
                s += w * half_[std::abs(k)] * table_value(k * h_ - u);
            }
            return s * h_;
        }
    }
    return 0.0;
}

double AcceptanceProfile::support_radius() const {
    switch (kind_) {
        case Kind::gaussian:
            return 12.0 * p0_;
        case Kind::smoothed_square:
            return p1_ + 40.0 / p0_;
        case Kind::tabulated:
            return h_ * (half_.size() - 1);
    }
    return 0.0;
}

std::optional<double> AcceptanceProfile::sigma_x2_closed() const {
    switch (kind_) {
        case Kind::gaussian:
            return p0_ * p0_;
        case Kind::smoothed_square:
            return smoothed_square_sigma_x2(p0_, p1_);
        case Kind::tabulated:
            return std::nullopt;
    }
    return std::nullopt;
}

std::optional<double> AcceptanceProfile::eta_p2_closed() const {
    switch (kind_) {
        case Kind::gaussian:
            return 1.0 / (4.0 * p0_ * p0_);
        case Kind::smoothed_square:
            return smoothed_square_eta_p2(p0_, p1_);
        case Kind::tabulated:
            return std::nullopt;
    }
    return std::nullopt;
}

ProfileQuadrature AcceptanceProfile::quadrature(int points) const {
    ProfileQuadrature q{0.0, 0.0, 0.0};
    if (kind_ == Kind::tabulated) {
        const int mh = static_cast<int>(half_.size());
        for (int k = -(mh - 1); k <= mh - 1; ++k) {
            const double w = (std::abs(k) == mh - 1 ? 0.5 : 1.0) * h_;
            const double f = half_[std::abs(k)];
            const double d = half_deriv_[std::abs(k)];
            const double u = k * h_;
            q.norm += w * f * f;
            q.sigma_x2 += w * u * u * f * f;
            q.eta_p2 += w * d * d;
        }
        return q;
    }
    if (points < 3) {
        throw DomainError("AcceptanceProfile::quadrature: need at least 3 points");
    }
    const double r = support_radius();
    const double h = 2.0 * r / (points - 1);
    for (int k = 0; k < points; ++k) {
        const double w = (k == 0 || k == points - 1) ? 0.5 * h : h;
        const double u = -r + k * h;
        const double f = value(u);
        const double d = derivative(u);
        q.norm += w * f * f;
        q.sigma_x2 += w * u * u * f * f;
        q.eta_p2 += w * d * d;
    }
    return q;
}

double smoothed_square_sigma_x2(double alpha, double b) {
    const double ab = alpha * b;
    const double ch = std::cosh(ab);
    const double sh = std::sinh(ab);
    return b * b *
           (1.0 - 2.0 * ab * ch / (3.0 * (ab * ch - sh)) + std::numbers::pi * std::numbers::pi / (3.0 * ab * ab));
}

double smoothed_square_eta_p2(double alpha, double b) {
    const double ab = alpha * b;
    const double sh = std::sinh(ab);
    return alpha * alpha / 6.0 * (1.0 / (ab / std::tanh(ab) - 1.0) - 3.0 / (sh * sh));
}

double sigma_x_of_profile(const AcceptanceProfile &f) {
    const double quad = f.quadrature().sigma_x2;
    if (!std::isfinite(quad)) {
        throw DomainError("sigma_x_of_profile: divergent second moment");
    }
    const auto closed = f.sigma_x2_closed();
    if (closed && std::abs(*closed - quad) <= 1e-8 * std::abs(quad)) {
        return std::sqrt(*closed);
    }
    return std::sqrt(quad);
}

double eta_p(const AcceptanceProfile &f) {
    const auto q = f.quadrature();
    if (std::abs(q.norm - 1.0) > kNormTol) {
        throw InvariantError("eta_p: non-normalized profile (norm " + std::to_string(q.norm) + ")");
    }
    const auto closed = f.eta_p2_closed();
    const double eta2 = closed ? *closed : q.eta_p2;
    const double sx = sigma_x_of_profile(f);
    if (eta2 * 4.0 * sx * sx < 1.0 - 1e-8) {
        throw ConsistencyError("eta_p: eta(p)^2 * 4 sigma_x^2 = " + std::to_string(eta2 * 4.0 * sx * sx) +
                               " is below 1");
    }
    return eta2;
}

}  // namespace qmeas::cv
