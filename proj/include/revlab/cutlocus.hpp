#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "revlab/surface.hpp"

namespace revlab {

enum class CutCause { kNone, kConjugate, kCrossing };
std::string_view to_string(CutCause cause);

struct CutDistance {
  double phi0 = 0.0;
  std::optional<double> s_conj;   // first conjugate point (within what was integrated)
  std::optional<double> s_cross;  // meeting with the mirror geodesic on theta = pi
  std::optional<double> s_cut;    // min of the two; none when neither occurs
  CutCause cause = CutCause::kNone;
  double t_cut = 0.0, theta_cut = 0.0;  // cut point (theta unwrapped)
  bool extrapolated = false;  // decided past the last radius with curvature, in the flat cone there
};

struct CutOptions {
  // Past this radius the remaining |G| mass must be below `flat_tail` for the
  // straight-line extrapolation to be used; otherwise the trace runs to t_max.
  double flat_tail = 1e-10;
};

// Cut distance along the geodesic from q = (t0, 0) with launch angle phi0 in
// (0, pi). Throws HorizonTooSmall when the geodesic leaves the domain before
// the answer is decided.
CutDistance cut_distance(const SurfaceModel& S, double t0, double phi0, const CutOptions& options = {});

enum class CutStructure { kEmpty, kOppositeMeridianSubray, kOther };
std::string_view to_string(CutStructure structure);

struct CutPoint {
  double t;
  double theta;  // wrapped to (-pi, pi]
  int multiplicity;
};

struct CutReport {
  double t0 = 0.0;
  std::vector<CutDistance> records;
  std::vector<double> beyond_horizon;  // launch angles whose cut point lies past the domain
  std::vector<CutPoint> points;
  CutStructure structure = CutStructure::kEmpty;
  // First cut point along the opposite meridian, refined in phi0.
  std::optional<double> endpoint_t, endpoint_s, endpoint_phi;
};

// Sweeps phi0 = pi (j + 1/2) / resolution over (0, pi); mirror directions
// are covered by symmetry.
CutReport cut_locus(const SurfaceModel& S, double t0, int resolution = 1024, const CutOptions& options = {});

struct SectorPlan {
  int radii = 8;
  int angles = 16;
  double r_min = 0.25;
  double r_max_fraction = 0.8;  // of t_max
  int fan = 1024;
};

struct SectorWitness {
  double q_t, q_theta;
  double cut_t, cut_theta;
};

struct SectorCertificate {
  bool admissible = true;
  std::optional<SectorWitness> witness;
  std::size_t points_sampled = 0;
  std::size_t cut_points_checked = 0;
};

// Caches cut loci of base points (r, 0) for every sampled radius; loci of
// (r, theta) are rotations of them.
class SectorSampler {
 public:
  SectorSampler(const SurfaceModel& S, const SectorPlan& plan = {});
  // Sampling certificate that no cut point of a sampled q in V(delta) lies in
  // V(delta).
  SectorCertificate admissible(double delta) const;
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<CutReport>& loci() const { return loci_; }
  const SectorPlan& plan() const { return plan_; }

 private:
  SectorPlan plan_;
  std::vector<double> radii_;
  std::vector<CutReport> loci_;
};

SectorCertificate sector_admissible(const SurfaceModel& S, double delta, const SectorPlan& plan = {});

struct DeltaEstimate {
  double delta0 = 0.0;   // largest admissible sampled delta
  double bracket = 0.0;  // width of the final bisection bracket (0 when pi is admissible)
  int iterations = 0;
};

DeltaEstimate max_admissible_delta(const SurfaceModel& S, const SectorPlan& plan = {}, int iterations = 12);
DeltaEstimate max_admissible_delta(const SectorSampler& sampler, int iterations = 12);

}  // namespace revlab
