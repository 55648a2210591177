#include "thermolab/fermions.hpp"

namespace thermolab {

MatrixC jordan_wigner(int mode_index, int n_modes, FermionOp kind) {
  if (mode_index < 1 || mode_index > n_modes)
    throw precondition_error("jordan_wigner: mode index out of range");
  const long d = 1L << n_modes;
  MatrixC out = MatrixC::Zero(d, d);
  // Basis state index encodes occupations with mode 1 as most significant bit.
  const int bit = n_modes - mode_index;
  for (long s = 0; s < d; ++s) {
    const bool occupied = (s >> bit) & 1;
    int string_parity = 0;
    for (int y = 1; y < mode_index; ++y) string_parity ^= static_cast<int>((s >> (n_modes - y)) & 1);
    const double sign = string_parity ? -1.0 : 1.0;
    if (kind == FermionOp::annihilate && occupied)
      out(s ^ (1L << bit), s) = sign;
    else if (kind == FermionOp::create && !occupied)
      out(s | (1L << bit), s) = sign;
  }
  return out;
}

MatrixC fermion_number(int mode_index, int n_modes) {
  return jordan_wigner(mode_index, n_modes, FermionOp::create) *
         jordan_wigner(mode_index, n_modes, FermionOp::annihilate);
}

}  // namespace thermolab
