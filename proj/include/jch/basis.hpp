// basis.hpp — Truncated single-site product basis {g,e} x {0..n_max} and the
// ladder operators on it.

#pragma once

#include <vector>

#include <Eigen/Dense>

namespace jch {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

enum class AtomLevel { g, e };

struct BasisState {
    AtomLevel atom{AtomLevel::g};
    int photons{0};

    bool operator==(const BasisState&) const = default;
};

// Ordering is photon-number major, atom level minor:
// |g,0>, |e,0>, |g,1>, |e,1>, ...
struct SingleSiteBasis {
    int n_max{1};

    int dimension() const { return 2 * (n_max + 1); }
    int index(AtomLevel atom, int photons) const {
        return 2 * photons + (atom == AtomLevel::e ? 1 : 0);
    }
    BasisState state(int index) const {
        return {index % 2 == 0 ? AtomLevel::g : AtomLevel::e, index / 2};
    }
    // Total excitation number a + m of basis state `index`.
    int excitations(int index) const {
        return index / 2 + index % 2;
    }
    std::vector<BasisState> states() const;
};

SingleSiteBasis build_basis(int n_max);

// Atomic lowering operator A: A|e,m> = |g,m>.
ComplexMatrix atom_lowering(const SingleSiteBasis& basis);

// Photon annihilation C: C|a,m> = sqrt(m)|a,m-1>. C^dag is truncated at n_max.
ComplexMatrix photon_annihilation(const SingleSiteBasis& basis);

// Diagonal of the total excitation number A^dag A + C^dag C.
Eigen::VectorXd excitation_numbers(const SingleSiteBasis& basis);

} // namespace jch
