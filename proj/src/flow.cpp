#include "pfc/flow.hpp"

#include <cmath>

#include "pfc/errors.hpp"
#include "pfc/model.hpp"

namespace pfc {

FlowStepper::FlowStepper(const ModelSpec& spec, int m, double dt, Exec exec)
    : spec_(spec), m_(m), dt_(dt), exec_(exec) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time step dt must be positive");
  const std::size_t n = std::size_t(m + 1) * std::size_t(m + 1);
  lap_.resize(n);
  denom_.resize(n);
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) {
      const auto k = std::size_t(flat(i, j, m));
      lap_[k] = lap_symbol<double>(spec, i, j);
      denom_[k] = 1.0 - dt * lap_[k] * gamma_symbol<double>(spec, lap_[k]);
      if (k != 0 && !(denom_[k] > 0.0))
        throw NumericalError("flow step unstable: 1 - dt L gamma <= 0 at mode (" + std::to_string(i) + "," +
                             std::to_string(j) + "); reduce dt");
    }
}

void FlowStepper::step(CoeffGrid& a) const {
  if (a.m != m_) a = resized(a, m_);
  const CoeffGrid c = cubic(a, m_, exec_);
  for (std::size_t k = 1; k < a.size(); ++k) a.vals[k] = (a.vals[k] + dt_ * lap_[k] * c.vals[k]) / denom_[k];
}

CoeffGrid flow_step(const CoeffGrid& a, const ModelSpec& spec, double dt, Exec exec) {
  CoeffGrid out = a;
  FlowStepper(spec, a.m, dt, exec).step(out);
  return out;
}

}  // namespace pfc
