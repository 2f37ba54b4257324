#include "vil/construction.hpp"

#include <stdexcept>
#include <string>

namespace vil {

void ConstructionParams::validate() const {
  if (!(M >= 2.0)) throw std::invalid_argument("construction.M: must satisfy M >= 2");
  if (N < 1) throw std::invalid_argument("construction.N: must satisfy N >= 1");
  if (N0 < 1) throw std::invalid_argument("construction.N0: must satisfy N0 >= 1");
  if (!(p > 2.0 && p <= 3.0)) throw std::invalid_argument("construction.p: p must lie in (2, 3]");
  if (n_pert < 1) throw std::invalid_argument("construction.n_pert: must satisfy n_pert >= 1");
  if (!(T_horizon > 0.0) || T_horizon > default_horizon() * (1.0 + 1e-12))
    throw std::invalid_argument("construction.T: must lie in (0, min(1, M^-3)], got " +
                                std::to_string(T_horizon));
  if (delta && !(*delta > 0.0))
    throw std::invalid_argument("construction.delta: must be positive");
}

}  // namespace vil
