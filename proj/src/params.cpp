#include "frachelm/params.hpp"

#include <sstream>

#include "frachelm/errors.hpp"

namespace frachelm {

void ScatteringParams::validate() const {
  if (!(s > 0.75 && s < 1.5)) {
    std::ostringstream os;
    os << "fractional order s = " << s << " outside the admissible range (3/4, 3/2)";
    throw Error(ErrorKind::ValidationError, os.str());
  }
  if (!(k > 0.0)) {
    throw Error(ErrorKind::ValidationError, "wavenumber k must be positive");
  }
  if (branch != 1 && branch != -1) {
    throw Error(ErrorKind::ValidationError, "branch must be +1 or -1");
  }
}

void ScatteringParams::validate_for_inversion() const {
  validate();
  if (!(s > 0.8 && s < 1.5)) {
    std::ostringstream os;
    os << "inversion requires s in (4/5, 3/2), got s = " << s;
    throw Error(ErrorKind::ValidationError, os.str());
  }
  if (!(k0 > 0.0)) {
    throw Error(ErrorKind::ValidationError, "k0 must be positive");
  }
  if (!(k > k0)) {
    std::ostringstream os;
    os << "inversion requires k > k0 (k = " << k << ", k0 = " << k0 << ")";
    throw Error(ErrorKind::ValidationError, os.str());
  }
}

void QuadratureConfig::validate() const {
  if (!(pv_window > 0.0 && pv_window < 1.0)) {
    throw Error(ErrorKind::ValidationError, "pv_window must lie in (0, 1)");
  }
  if (tail_cut < 0.0) {
    throw Error(ErrorKind::ValidationError, "tail_cut must be nonnegative (0 = automatic)");
  }
  if (panels < 2 || laplace_nodes < 2) {
    throw Error(ErrorKind::ValidationError, "quadrature node counts must be >= 2");
  }
  if (!(eps > 0.0) || !(tol > 0.0)) {
    throw Error(ErrorKind::ValidationError, "eps and tol must be positive");
  }
}

}  // namespace frachelm
