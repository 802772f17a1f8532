#include "wdn/network.hpp"

namespace wdn {

// Desk-scale two-region benchmark (SI units throughout).
//
//   R1 --PU1--> J1 --- J2 --- J3 --V1(PBV)--> J5 --- J6 --- J7
//               |              |              |      |      |
//               +----- J4 -----+              +----- J8 ----+
//                      |                             |
//                      +--P9--- T1 ---P10------------+
//                               ^
//                               +--PU2-- J6
//
// Region 1 (J1..J4) sits on higher ground and is fed by the river pump PU1.
// Region 2 (J5..J8) is lower; the PBV V1 on the J3 -> J5 trunk breaks the
// excess head. The elevated tank T1 floats on both regions through P9/P10
// and is refilled from J6 by the booster PU2, which is rule-managed.
// Both pump curves share the three-point shape (0, H), (Q, 0.6 H), (2Q, 0.2 H).
Network build_mininet() {
  std::vector<Node> nodes = {
      {"R1", Reservoir{44.0}},
      {"J1", Junction{6.0, 0.0}},
      {"J2", Junction{8.0, 0.0}},
      {"J3", Junction{10.0, 0.0}},
      {"J4", Junction{12.0, 0.0}},
      {"J5", Junction{0.0, 0.0}},
      {"J6", Junction{2.0, 0.0}},
      {"J7", Junction{4.0, 0.0}},
      {"J8", Junction{3.0, 0.0}},
      {"T1", Tank{45.0, 1.0, 8.0, 4.0, 12.0}},
  };

  auto pipe = [](std::string id, std::string a, std::string b, double length, double diameter) {
    return Link{std::move(id), std::move(a), std::move(b), Pipe{length, diameter, 100.0, 0.0, false}};
  };
  std::vector<Link> links = {
      Link{"PU1", "R1", "J1", Pump{"C1", 1.0, 0.3, 3.0}},
      pipe("P1", "J1", "J2", 600.0, 0.09),
      pipe("P2", "J2", "J3", 600.0, 0.12),
      pipe("P3", "J3", "J4", 600.0, 0.12),
      pipe("P4", "J4", "J1", 800.0, 0.12),
      Link{"V1", "J3", "J5", PbvValve{0.12, 40.0, 8.0, 50.0, 0.0}},
      pipe("P5", "J5", "J6", 600.0, 0.12),
      pipe("P6", "J6", "J7", 600.0, 0.12),
      pipe("P7", "J7", "J8", 600.0, 0.09),
      pipe("P8", "J8", "J5", 800.0, 0.12),
      pipe("P9", "T1", "J4", 1500.0, 0.09),
      pipe("P10", "T1", "J8", 1500.0, 0.09),
      Link{"PU2", "J6", "T1", Pump{"C2", 1.0, 0.3, 3.0}},
  };

  std::vector<Curve> curves = {
      {"C1", {{0.0, 20.0}, {0.02, 12.0}, {0.04, 4.0}}},
      {"C2", {{0.0, 25.0}, {0.0025, 15.0}, {0.005, 5.0}}},
  };

  std::map<std::string, int> regions = {{"J1", 1}, {"J2", 1}, {"J3", 1}, {"J4", 1},
                                        {"J5", 2}, {"J6", 2}, {"J7", 2}, {"J8", 2}};
  std::vector<std::string> interest = {"J2", "J4", "J6", "J8"};

  return Network::create(std::move(nodes), std::move(links), std::move(curves),
                         FlowUnit::CubicMetersPerSecond, std::move(regions),
                         std::move(interest));
}

}  // namespace wdn
