#ifndef KINETIC_TABLEAU_HPP_
#define KINETIC_TABLEAU_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace kinetic {

// One Runge-Kutta table. The abscissae c are defined as row sums of A
// (columns 1..i-1 for the explicit convention, 1..i for the implicit one)
// and are filled in by the factory functions below.
struct ButcherTable {
  enum class Kind { Explicit, DiagonallyImplicit };

  int stages = 0;
  Kind kind = Kind::Explicit;
  std::vector<double> a;  // stages x stages, row-major
  std::vector<double> b;
  std::vector<double> c;

  double at(int i, int j) const { return a[static_cast<size_t>(i) * stages + j]; }

  static ButcherTable explicit_table(int stages, std::vector<double> a, std::vector<double> b);
  static ButcherTable implicit_table(int stages, std::vector<double> a, std::vector<double> b);
};

struct ButcherPair {
  ButcherTable explicit_part;
  ButcherTable implicit_part;
  std::string name;
  int design_order = 0;
};

enum class SchemeKind { TypeI, TypeII, ARS };

struct SchemeClass {
  SchemeKind kind;
  bool sa;   // weights b equal the last row of the implicit A
  bool gsa;  // sa and the explicit weights equal the last explicit row
};

const char* to_string(SchemeKind kind);

// The four published schemes, coefficients transcribed verbatim
// (rationals as rational literals, decimals as printed).
const std::vector<ButcherPair>& builtin_schemes();

// Lookup by name ("imex433", "ars443", "gsa3", "isa3", or the full
// display name); throws MalformedTableau when unknown.
const ButcherPair& builtin_scheme(const std::string& name);

std::vector<std::string> builtin_scheme_names();

// Classic RK4, used by the macroscopic reference solvers.
ButcherTable classic_rk4();

SchemeClass classify(const ButcherPair& pair);

// Residuals of the order conditions b.e-1, b.c-1/2, b.c^2-1/3, b^T A c-1/6,
// truncated at the requested order p in {1,2,3}.
std::vector<double> order_condition_residuals(const ButcherTable& table, int p);

struct NsConditionResiduals {
  double r1;  // inf-norm of \hat{\tilde A} \hat{A}^{-1} (a - \tilde a)
  double r2;  // | \hat{\tilde b}^T \hat{A}^{-1} (a - \tilde a) |
};

// Extra conditions that control uniform accuracy at the diffusive level.
// Solved by forward substitution on the trailing implicit block; throws
// NotTypeII for type I pairs.
NsConditionResiduals ns_condition_residuals(const ButcherPair& pair);

// |b^T A^{-1} e - 1| evaluated on the invertible part of the implicit table
// (the whole table for type I, the trailing block for type II). Zero for
// stiffly accurate schemes.
double l_stability_residual(const ButcherPair& pair);

struct AxisAmplification {
  double max_amplification;  // max |R(z)| over the sampled negative axis
  double argmax_z;
};

// Scans the implicit stability function R(z) = 1 + z b^T (I - zA)^{-1} e on
// z in [z_min, 0). Values above 1 flag a damping gap: stiff non-conserved
// modes whose z lands there grow geometrically per step.
AxisAmplification implicit_axis_amplification(const ButcherPair& pair, double z_min = -200.0);

// Plain-text report for all builtin pairs (class, SA/GSA, order residuals,
// extra-condition residuals).
void write_tableau_report(std::ostream& os);

}  // namespace kinetic

#endif  // KINETIC_TABLEAU_HPP_
