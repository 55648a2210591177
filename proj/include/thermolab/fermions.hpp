#pragma once

#include "thermolab/types.hpp"

namespace thermolab {

enum class FermionOp { annihilate, create };

// Fermionic ladder operator f_x / f^dag_x on n_modes modes as a 2^n matrix in
// the Fock basis |n_1 ... n_M>, mode 1 being the most significant bit. Carries
// the Jordan-Wigner sign string (-1)^(sum_{y<x} n_y). mode_index is 1-based.
MatrixC jordan_wigner(int mode_index, int n_modes, FermionOp kind);

// Number operator f^dag_x f_x.
MatrixC fermion_number(int mode_index, int n_modes);

}  // namespace thermolab
