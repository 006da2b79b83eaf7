#pragma once

#include "odmrsim/matrix.hpp"

namespace odmrsim {

// Basis convention for all 3x3 electronic operators in this project:
// {|+1>, |0>, |-1>}, indices 0, 1, 2. Every module that touches the
// electronic spin assumes this ordering.
struct SpinOps {
    ComplexMatrix sx, sy, sz;
    ComplexMatrix splus, sminus;
};

/// Standard spin-1 operators in the {|+1>, |0>, |-1>} basis.
SpinOps spin1_operators();

}  // namespace odmrsim
