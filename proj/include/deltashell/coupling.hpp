#pragma once

#include <complex>

namespace deltashell {

/// Ordered pair of complex coupling constants on the outer (+) and inner (-)
/// interaction supports.
struct Coupling {
    std::complex<double> alpha_plus;
    std::complex<double> alpha_minus;

    std::complex<double> sum() const { return alpha_plus + alpha_minus; }
    std::complex<double> product() const { return alpha_plus * alpha_minus; }
};

} // namespace deltashell
