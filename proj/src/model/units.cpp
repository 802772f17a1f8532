#include "wdn/units.hpp"

namespace wdn::units {

double psi_to_head_m(double psi) { return psi * kMetersPerPsi; }

double head_m_to_psi(double meters) { return meters / kMetersPerPsi; }

}  // namespace wdn::units
