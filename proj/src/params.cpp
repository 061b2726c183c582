#include "stokesdarcy/params.hpp"

#include <stdexcept>

namespace stokesdarcy {

std::vector<std::string> PhysicalParams::validate() const {
  if (!(mu > 0)) throw std::invalid_argument("PhysicalParams: mu must be positive");
  if (!(K > 0)) throw std::invalid_argument("PhysicalParams: K must be positive");
  if (alpha < 0) throw std::invalid_argument("PhysicalParams: alpha must be nonnegative");
  std::vector<std::string> warnings;
  if (kappa() > 1.0)
    warnings.push_back("permeability mu*K = " + std::to_string(kappa()) +
                       " exceeds 1; outside the assumed parameter regime");
  if (beta() > mu)
    warnings.push_back("BJS coefficient beta = " + std::to_string(beta()) +
                       " exceeds mu; outside the assumed parameter regime");
  return warnings;
}

} // namespace stokesdarcy
