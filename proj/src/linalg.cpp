#include "linalg.hpp"

#ifdef WQED_HAVE_LAPACKE
#include <lapacke.h>
#endif

namespace wqed::detail {

void general_eig(const CMatrix& a, CVector& values, CMatrix& vectors)
{
    const Eigen::Index n = a.rows();
#ifdef WQED_HAVE_LAPACKE
    CMatrix work = a;
    values.resize(n);
    vectors.resize(n, n);
    auto* pa = reinterpret_cast<lapack_complex_double*>(work.data());
    auto* pw = reinterpret_cast<lapack_complex_double*>(values.data());
    auto* pv = reinterpret_cast<lapack_complex_double*>(vectors.data());
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', static_cast<lapack_int>(n), pa,
                                          static_cast<lapack_int>(n), pw, nullptr, 1, pv,
                                          static_cast<lapack_int>(n));
    if (info != 0)
        throw ConvergenceError("zgeev failed", static_cast<double>(info));
#else
    Eigen::ComplexEigenSolver<CMatrix> es(a, true);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("eigensolver failed", 0.0);
    values = es.eigenvalues();
    vectors = es.eigenvectors();
#endif
}

}  // namespace wqed::detail
