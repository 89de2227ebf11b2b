#pragma once

#include "wqed/modes.hpp"

namespace wqed::detail {

// Right eigenpairs of a general complex matrix. Uses LAPACK zgeev when it was found at
// configure time (an order of magnitude faster for the pair problem), Eigen otherwise.
void general_eig(const CMatrix& a, CVector& values, CMatrix& vectors);

}  // namespace wqed::detail
