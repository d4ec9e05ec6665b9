#include "jch/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace jch {

std::vector<BasisState> SingleSiteBasis::states() const {
    std::vector<BasisState> out;
    out.reserve(dimension());
    for (int m = 0; m <= n_max; ++m) {
        out.push_back({AtomLevel::g, m});
        out.push_back({AtomLevel::e, m});
    }
    return out;
}

SingleSiteBasis build_basis(int n_max) {
    if (n_max < 1) throw std::invalid_argument("basis truncation n_max must be >= 1");
    return SingleSiteBasis{n_max};
}

ComplexMatrix atom_lowering(const SingleSiteBasis& basis) {
    ComplexMatrix a = ComplexMatrix::Zero(basis.dimension(), basis.dimension());
    for (int m = 0; m <= basis.n_max; ++m)
        a(basis.index(AtomLevel::g, m), basis.index(AtomLevel::e, m)) = 1.0;
    return a;
}

ComplexMatrix photon_annihilation(const SingleSiteBasis& basis) {
    ComplexMatrix c = ComplexMatrix::Zero(basis.dimension(), basis.dimension());
    for (int m = 1; m <= basis.n_max; ++m) {
        const double amp = std::sqrt(static_cast<double>(m));
        c(basis.index(AtomLevel::g, m - 1), basis.index(AtomLevel::g, m)) = amp;
        c(basis.index(AtomLevel::e, m - 1), basis.index(AtomLevel::e, m)) = amp;
    }
    return c;
}

Eigen::VectorXd excitation_numbers(const SingleSiteBasis& basis) {
    Eigen::VectorXd n(basis.dimension());
    for (int i = 0; i < basis.dimension(); ++i)
        n(i) = static_cast<double>(basis.excitations(i));
    return n;
}

} // namespace jch
