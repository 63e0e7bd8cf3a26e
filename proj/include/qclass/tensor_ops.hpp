#pragma once

// Bipartite structure of the 4-dimensional space: index (i) = 2a + b with
// a the first-qubit and b the second-qubit basis label.

#include "qclass/matrix.hpp"

namespace qclass {

enum class Subsystem { A, B };

// Transpose of the chosen subsystem.  Entry permutation + conjugation only,
// so trace and Frobenius norm are preserved exactly and applying it twice
// returns the input bit for bit.
Mat4 partial_transpose(const Mat4& m, Subsystem which);

// Trace out the complement of `keep`;  trace(result) = trace(m).
Mat2 partial_trace(const Mat4& m, Subsystem keep);

Mat4 tensor_product(const Mat2& x, const Mat2& y);

}  // namespace qclass
