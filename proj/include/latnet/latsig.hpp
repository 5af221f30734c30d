#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "latnet/lattice.hpp"
#include "latnet/residuated.hpp"

namespace latnet {

// A scalar signal on a finite lattice: one value per element, indexed by the
// lattice's own element indices (not by any matrix ordering).
using Signal = std::vector<double>;

enum class ShiftFlavor { meet, join };

// Shift of f by x: (T_x^meet f)_y = f[x ^ y] and (T_x^join f)_y = f[x v y].
// Linear in f; T_{x^y} = T_x T_y, hence idempotent and commuting.
Signal shift(const FiniteLattice& L, int x, const Signal& f, ShiftFlavor flavor);

// Semilattice convolution (h conv f)_y = sum_x h[x] * f[x ^ y] (meet flavor;
// join flavor dual). Equals sum_x h[x] (T_x f); commutes in the filters.
Signal convolve(const FiniteLattice& L, const Signal& h, const Signal& f,
                ShiftFlavor flavor);

// Indicator encodings. one_hot is 1 exactly at x. upset_indicator(y) is 1 at
// every x with y <= x; it is an eigenvector of every meet shift T_a with
// eigenvalue [y <= a]. downset_indicator(y) is 1 at every x with x <= y; it
// is an eigenvector of every join shift T_a with eigenvalue [a <= y].
Signal one_hot(const FiniteLattice& L, int x);
Signal upset_indicator(const FiniteLattice& L, int y);
Signal downset_indicator(const FiniteLattice& L, int y);

// Matrix presentation of the shift eigenbases under the canonical linear
// extension (see linear_extension): position p of a matrix row/column stands
// for element order[p].
//
//   b_meet[i][j] = 1 iff order[i] <= order[j]  (column j = downset of order[j])
//   b_join      = transpose of b_meet          (column j = upset of order[j])
//   theta       : the unique matrix with theta * b_meet = b_join.
//
// b_meet is upper unitriangular in extension order, so theta is an exact
// integer matrix (its columns are Moebius-function values); no rounding is
// involved anywhere.
struct BasisPair {
  int m = 0;
  std::vector<int> order;            // position -> element index
  std::vector<std::uint8_t> b_meet;  // m*m, row-major
  std::vector<std::uint8_t> b_join;  // m*m, row-major
  std::vector<long long> theta;      // m*m, row-major, exact
};

// Guard: m <= 512 (TooLarge); the solve is cubic.
BasisPair eigenbasis(const FiniteLattice& L);

// theta applied to a coordinate vector in extension order (f[p] is the value
// at element order[p]). Exact integer overload plus a double convenience.
std::vector<long long> apply_theta(const BasisPair& B, const std::vector<long long>& f);
std::vector<double> apply_theta(const BasisPair& B, const std::vector<double>& f);

// True iff theta carries every meet shift to the matching join shift
// (theta T_x^meet = T_x^join theta for all x). Exact integer comparison;
// holds only for the one-element lattice.
bool theta_intertwines(const FiniteLattice& L);

// Residuated convolution of lattice-indexed signals with values in a scalar
// residuated structure R:
//
//   (h conv f)(x) = JOIN_y  star(h(y), f(x ^ y))
//
// For fixed f this is join-preserving in h, with right adjoint
//
//   (g conv' f)(y) = MEET_x residual(f(x ^ y), g(x)),
//
// so (h conv f) <= g pointwise iff h <= (g conv' f) pointwise.
std::vector<double> residuated_convolve(const FiniteLattice& K, const ScalarResiduated& R,
                                        const std::vector<double>& h,
                                        const std::vector<double>& f);
std::vector<double> residuated_convolve_adjoint(const FiniteLattice& K,
                                                const ScalarResiduated& R,
                                                const std::vector<double>& g,
                                                const std::vector<double>& f);

// CSV exchange format: header line `element_label,value`, then one row per
// element in index order. Labels are quoted RFC-4180 style when they contain
// a comma, quote, or newline. read_signal_csv matches rows to elements by
// label (every element must appear exactly once) and accepts the literals
// `inf`/`-inf`.
void write_signal_csv(std::ostream& out, const FiniteLattice& L, const Signal& f);
Signal read_signal_csv(std::istream& in, const FiniteLattice& L);

}  // namespace latnet
