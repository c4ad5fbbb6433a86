#include "nrbmf/rb_scalar.hpp"

#include <ostream>

namespace nrbmf {

RBScalar from_e1e2(const E1E2Scalar& s) {
  const double p_re = s.c_plus.real(), p_im = s.c_plus.imag();
  const double m_re = s.c_minus.real(), m_im = s.c_minus.imag();
  return RBScalar((p_re + m_re) / 2.0, (p_im + m_im) / 2.0,
                  (p_re - m_re) / 2.0, (p_im - m_im) / 2.0);
}

std::ostream& operator<<(std::ostream& os, const RBScalar& a) {
  return os << '(' << a.real() << ", " << a.i() << ", " << a.j() << ", "
            << a.k() << ')';
}

}  // namespace nrbmf
