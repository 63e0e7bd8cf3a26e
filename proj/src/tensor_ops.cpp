#include "qclass/tensor_ops.hpp"

namespace qclass {

Mat4 partial_transpose(const Mat4& m, Subsystem which) {
  Mat4 r;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ap = 0; ap < 2; ++ap)
        for (int bp = 0; bp < 2; ++bp) {
          if (which == Subsystem::B)
            r(2 * a + b, 2 * ap + bp) = m(2 * a + bp, 2 * ap + b);
          else
            r(2 * a + b, 2 * ap + bp) = m(2 * ap + b, 2 * a + bp);
        }
  return r;
}

Mat2 partial_trace(const Mat4& m, Subsystem keep) {
  Mat2 r;
  if (keep == Subsystem::A) {
    for (int a = 0; a < 2; ++a)
      for (int ap = 0; ap < 2; ++ap)
        r(a, ap) = m(2 * a + 0, 2 * ap + 0) + m(2 * a + 1, 2 * ap + 1);
  } else {
    for (int b = 0; b < 2; ++b)
      for (int bp = 0; bp < 2; ++bp)
        r(b, bp) = m(0 + b, 0 + bp) + m(2 + b, 2 + bp);
  }
  return r;
}

Mat4 tensor_product(const Mat2& x, const Mat2& y) {
  Mat4 r;
  for (int a = 0; a < 2; ++a)
    for (int ap = 0; ap < 2; ++ap)
      for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp)
          r(2 * a + b, 2 * ap + bp) = x(a, ap) * y(b, bp);
  return r;
}

}  // namespace qclass
