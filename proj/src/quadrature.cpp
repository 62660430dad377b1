#include "maxrep/quadrature.hpp"

#include <functional>

namespace maxrep {

QuadratureResult integrate_fn(const std::function<double(double)>& f, double a,
                              double b, double abs_tol) {
  return integrate(f, a, b, abs_tol);
}

}  // namespace maxrep
