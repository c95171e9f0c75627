#ifndef KINETIC_IMEX_HPP_
#define KINETIC_IMEX_HPP_

#include <functional>
#include <vector>

#include "kinetic/equilibrium.hpp"
#include "kinetic/fluid.hpp"
#include "kinetic/grid.hpp"
#include "kinetic/tableau.hpp"
#include "kinetic/transport.hpp"

namespace kinetic {

enum class Model { BGK, ESBGK };

enum class TauLaw {
  Unit,         // tau = 1
  Linear,       // tau = coeff rho
  Power,        // tau = coeff rho sqrt(T)
  PressureLaw,  // tau = rho T / (mu_ref (1 - nu))
};

struct ModelConfig {
  Model model = Model::BGK;
  double eps = 1.0;
  double nu = 0.0;
  TauLaw tau_law = TauLaw::Unit;
  double tau_coeff = 1.0;  // Linear/Power coefficient, or mu_ref for PressureLaw
};

void validate(const ModelConfig& cfg);

double collision_frequency(const ModelConfig& cfg, double rho, double temperature);

struct TimeControls {
  double cfl = 0.9;
  double speed = 0.0;        // dt = cfl dx / speed; 0 means use vmax
  double dt_override = 0.0;  // > 0 fixes dt directly
  double t_end = 0.0;

  double dt(const SpatialGrid& sg, const VelocityGrid& vg) const {
    if (dt_override > 0.0) return dt_override;
    const double s = speed > 0.0 ? speed : vg.vmax;
    return cfl * sg.dx() / s;
  }
};

// Worst-over-stages consistency residuals, filled when requested: the
// moment identity (stage macros from the transport-only part vs the moments
// of the stage distribution) and the agreement of the closed-form second
// moment recursion with quadrature. With capture_stages set, the stage
// distributions and transport terms are copied out (identity tests).
struct StepDiagnostics {
  double moment_residual = 0.0;
  double sigma_residual = 0.0;
  bool capture_stages = false;
  std::vector<DistributionField> stage_values;
  std::vector<DistributionField> stage_transport;
};

// One IMEX step with explicitly evaluated stage equilibria: stage macros
// come from the transport-only update (the relaxation sum carries no
// conserved moments), the second-moment tensor from its scalar-denominator
// update, and the stiff stage solve reduces to a convex combination of the
// assembled state and the stage equilibrium. Relaxation contributions are
// cached as computed; nothing is reconstructed by subtraction at small eps.
class ImexStepper {
 public:
  ImexStepper(const ButcherPair& pair, const ModelConfig& cfg, const VelocityGrid& vg,
              const SpatialGrid& sg, WenoOrder order);

  DistributionField step(const DistributionField& fn, double dt, StepDiagnostics* diag = nullptr);

  const SchemeClass& scheme_class() const { return cls_; }

 private:
  struct StageMacro;

  // Builds the stage Gaussian from the stage macros and second moments;
  // throws StepRejected around TensorNotPD.
  void build_stage_equilibrium(const StageMacro& stage, DistributionField& g, int k);

  const ButcherPair& pair_;
  ModelConfig cfg_;
  const VelocityGrid& vg_;
  const SpatialGrid& sg_;
  WenoOrder order_;
  SchemeClass cls_;
  std::vector<bool> relax_needed_;

  std::vector<DistributionField> transport_;
  std::vector<DistributionField> relax_;  // tau (G - f) / (eps + tau dt a_kk), i.e. relax/eps
  std::vector<RawMoments> transport_moments_;
  std::vector<std::vector<double>> relax_sigma_;  // per stage, 3 nx-packs
};

DistributionField imex_step(const DistributionField& fn, const ButcherPair& pair, double dt,
                            const ModelConfig& cfg, const VelocityGrid& vg, const SpatialGrid& sg,
                            WenoOrder order, StepDiagnostics* diag = nullptr);

struct ConservationTotals {
  double mass = 0.0;
  double momentum_x = 0.0;
  double momentum_y = 0.0;
  double energy = 0.0;
};

ConservationTotals conservation_totals(const DistributionField& f, const VelocityGrid& vg,
                                       const SpatialGrid& sg);

using Observer =
    std::function<void(int step, double t, const MacroFields&, const ConservationTotals&)>;

struct RunResult {
  DistributionField f;
  int steps = 0;
};

// Advances f0 to t_end; the final step is truncated to land on t_end
// exactly. The observer sees the initial state (step 0) and every accepted
// step. Non-finite states raise NonPhysicalState.
RunResult run(DistributionField f0, const ButcherPair& pair, const TimeControls& controls,
              const ModelConfig& cfg, const VelocityGrid& vg, const SpatialGrid& sg,
              WenoOrder order, const Observer& observer = {});

enum class LimitClosure { Energy, Temperature };

// Explicit RK step for the limit macroscopic system using the same per
// velocity node upwind transport applied to the discrete equilibrium
// closure; the epsilon -> 0 comparison oracle for the kinetic step. The
// Temperature closure replaces the energy update by the advective
// temperature form.
FluidState euler_limit_step(const FluidState& un, const ButcherTable& explicit_table, double dt,
                            const VelocityGrid& vg, const SpatialGrid& sg, WenoOrder order,
                            LimitClosure closure = LimitClosure::Energy);

}  // namespace kinetic

#endif  // KINETIC_IMEX_HPP_
