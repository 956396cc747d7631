#pragma once

#include <vector>

#include "pfc/spectral.hpp"

namespace pfc {

// First-order semi-implicit step of a_t = F(a): the linear part L gamma is
// implicit, the cubic term explicit. a_00 is copied, so the mean is conserved
// bit for bit.
class FlowStepper {
 public:
  FlowStepper(const ModelSpec& spec, int m, double dt, Exec exec = Exec::parallel);
  void step(CoeffGrid& a) const;
  double dt() const { return dt_; }

 private:
  ModelSpec spec_;
  int m_;
  double dt_;
  Exec exec_;
  std::vector<double> lap_;
  std::vector<double> denom_;  // 1 - dt L gamma
};

CoeffGrid flow_step(const CoeffGrid& a, const ModelSpec& spec, double dt, Exec exec = Exec::parallel);

}  // namespace pfc
