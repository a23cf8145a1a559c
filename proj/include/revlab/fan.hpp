#pragma once

#include <span>
#include <vector>

#include "revlab/kernels/fan_step.hpp"
#include "revlab/surface.hpp"

namespace revlab {

struct ThetaCrossing {
  bool reached = false;
  double t = 0.0;  // radius where theta first equals the target
  double s = 0.0;  // arc length there
};

// Coarse RK4 sweep of geodesics from (t0, 0) with initial angles phi in
// (0, pi), so theta increases along every lane. Records for each lane the
// first arrival at each target angle (targets ascending, all > 0). A lane
// stops once every target is reached, its length reaches length_cap, or it
// leaves the domain.
class FanScan {
 public:
  FanScan(const SurfaceModel& S, double t0, std::span<const double> phis, std::span<const double> targets,
          double length_cap, kernels::Isa isa = kernels::active_isa());

  std::size_t lanes() const { return n_; }
  std::size_t targets() const { return m_; }
  const ThetaCrossing& hit(std::size_t lane, std::size_t target) const { return hits_[lane * m_ + target]; }
  std::size_t steps() const { return steps_; }

 private:
  std::size_t n_, m_;
  std::vector<ThetaCrossing> hits_;
  std::size_t steps_ = 0;
};

}  // namespace revlab
