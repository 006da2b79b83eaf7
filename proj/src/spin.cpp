#include "odmrsim/spin.hpp"

#include <cmath>

namespace odmrsim {

SpinOps spin1_operators() {
    const double rt2 = std::sqrt(2.0);

    // S+|0> = sqrt(2)|+1>, S+|-1> = sqrt(2)|0> in the {|+1>,|0>,|-1>} order.
    ComplexMatrix splus(3);
    splus.at(0, 1) = rt2;
    splus.at(1, 2) = rt2;

    ComplexMatrix sminus = splus.dagger();

    ComplexMatrix sx = 0.5 * (splus + sminus);
    ComplexMatrix sy = Complex(0.0, -0.5) * (splus - sminus);

    ComplexMatrix sz(3);
    sz.at(0, 0) = 1.0;
    sz.at(2, 2) = -1.0;

    return {std::move(sx), std::move(sy), std::move(sz), std::move(splus), std::move(sminus)};
}

}  // namespace odmrsim
