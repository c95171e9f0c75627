#include "kinetic/tableau.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "kinetic/errors.hpp"

namespace kinetic {

namespace {

constexpr double kTol = 1e-12;

std::vector<double> row_sums(int s, const std::vector<double>& a, bool include_diagonal) {
  std::vector<double> c(s, 0.0);
  for (int i = 0; i < s; ++i) {
    double sum = 0.0;
    int jmax = include_diagonal ? i : i - 1;
    for (int j = 0; j <= jmax; ++j) sum += a[static_cast<size_t>(i) * s + j];
    c[i] = sum;
  }
  return c;
}

void check_shape(int s, const std::vector<double>& a, const std::vector<double>& b) {
  if (s <= 0 || a.size() != static_cast<size_t>(s) * s || b.size() != static_cast<size_t>(s))
    throw MalformedTableau("tableau dimensions do not match stage count");
}

}  // namespace

ButcherTable ButcherTable::explicit_table(int stages, std::vector<double> a, std::vector<double> b) {
  check_shape(stages, a, b);
  for (int i = 0; i < stages; ++i)
    for (int j = i; j < stages; ++j)
      if (a[static_cast<size_t>(i) * stages + j] != 0.0)
        throw MalformedTableau("explicit table must be strictly lower triangular");
  ButcherTable t;
  t.stages = stages;
  t.kind = Kind::Explicit;
  t.a = std::move(a);
  t.b = std::move(b);
  t.c = row_sums(stages, t.a, /*include_diagonal=*/false);
  return t;
}

ButcherTable ButcherTable::implicit_table(int stages, std::vector<double> a, std::vector<double> b) {
  check_shape(stages, a, b);
  for (int i = 0; i < stages; ++i)
    for (int j = i + 1; j < stages; ++j)
      if (a[static_cast<size_t>(i) * stages + j] != 0.0)
        throw MalformedTableau("implicit table must be lower triangular");
  ButcherTable t;
  t.stages = stages;
  t.kind = Kind::DiagonallyImplicit;
  t.a = std::move(a);
  t.b = std::move(b);
  t.c = row_sums(stages, t.a, /*include_diagonal=*/true);
  return t;
}

const char* to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::TypeI: return "type I";
    case SchemeKind::TypeII: return "type II";
    case SchemeKind::ARS: return "ARS";
  }
  return "?";
}

namespace {

// Third-order type I scheme IMEX-RK(4,3,3).
ButcherPair make_imex433() {
  const double g = 0.435866521508459;
  std::vector<double> ea = {
      0.0, 0.0, 0.0, 0.0,
      g, 0.0, 0.0, 0.0,
      1.243893189483362, -0.525959928729133, 0.0, 0.0,
      0.630412558152867, 0.786580740199155, -0.416993298352022, 0.0};
  std::vector<double> eb = {0.0, 1.208496649176010, -0.644363170684468, g};
  std::vector<double> ia = {
      g, 0.0, 0.0, 0.0,
      0.0, g, 0.0, 0.0,
      0.0, 0.282066739245771, g, 0.0,
      0.0, 1.208496649176010, -0.644363170684468, g};
  std::vector<double> ib = eb;
  return ButcherPair{ButcherTable::explicit_table(4, ea, eb),
                     ButcherTable::implicit_table(4, ia, ib), "IMEX-RK(4,3,3)", 3};
}

ButcherPair make_ars443() {
  std::vector<double> ea = {
      0.0, 0.0, 0.0, 0.0, 0.0,
      1.0 / 2, 0.0, 0.0, 0.0, 0.0,
      11.0 / 18, 1.0 / 18, 0.0, 0.0, 0.0,
      5.0 / 6, -5.0 / 6, 1.0 / 2, 0.0, 0.0,
      1.0 / 4, 7.0 / 4, 3.0 / 4, -7.0 / 4, 0.0};
  std::vector<double> eb = {1.0 / 4, 7.0 / 4, 3.0 / 4, -7.0 / 4, 0.0};
  std::vector<double> ia = {
      0.0, 0.0, 0.0, 0.0, 0.0,
      0.0, 1.0 / 2, 0.0, 0.0, 0.0,
      0.0, 1.0 / 6, 1.0 / 2, 0.0, 0.0,
      0.0, -1.0 / 2, 1.0 / 2, 1.0 / 2, 0.0,
      0.0, 3.0 / 2, -3.0 / 2, 1.0 / 2, 1.0 / 2};
  std::vector<double> ib = {0.0, 3.0 / 2, -3.0 / 2, 1.0 / 2, 1.0 / 2};
  return ButcherPair{ButcherTable::explicit_table(5, ea, eb),
                     ButcherTable::implicit_table(5, ia, ib), "ARS(4,4,3)", 3};
}

ButcherPair make_gsa3() {
  std::vector<double> ea = {
      0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
      43.0 / 100, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
      0.0, 336.0 / 929, 0.0, 0.0, 0.0, 0.0, 0.0,
      0.0, -29.0 / 42, 0.0, 0.0, 0.0, 0.0, 0.0,
      0.0, -1213.0 / 770, 2491.0 / 956, 267.0 / 3701, 0.0, 0.0, 0.0,
      0.0, -197.0 / 1238, 499.0 / 743, 0.0, 581.0 / 3768, 0.0, 0.0,
      0.0, 263.0 / 620, 134.0 / 16589, 1040.0 / 22119, 0.0, 4777.0 / 9174, 0.0};
  std::vector<double> eb = {0.0,          263.0 / 620,   134.0 / 16589, 1040.0 / 22119,
                            0.0,          4777.0 / 9174, 0.0};
  std::vector<double> ia = {
      0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
      0.0, 43.0 / 100, 0.0, 0.0, 0.0, 0.0, 0.0,
      0.0, -168.0 / 2459, 43.0 / 100, 0.0, 0.0, 0.0, 0.0,
      0.0, -2353.0 / 2100, 0.0, 43.0 / 100, 0.0, 0.0, 0.0,
      0.0, 889.0 / 1322, 0.0, 0.0, 43.0 / 100, 0.0, 0.0,
      0.0, 247.0 / 2416, 0.0, 408.0 / 3035, 0.0, 43.0 / 100, 0.0,
      0.0, 872.0 / 1201, 0.0, 139.0 / 4081, -50.0 / 237, 434.0 / 20817, 43.0 / 100};
  std::vector<double> ib = {0.0,           872.0 / 1201, 0.0,        139.0 / 4081,
                            -50.0 / 237,   434.0 / 20817, 43.0 / 100};
  return ButcherPair{ButcherTable::explicit_table(7, ea, eb),
                     ButcherTable::implicit_table(7, ia, ib), "IMEX-II-GSA3", 3};
}

ButcherPair make_isa3() {
  std::vector<double> ea = {
      0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
      1.0 / 5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
      0.0, 1.0 / 3, 0.0, 0.0, 0.0, 0.0, 0.0,
      0.0, 557.0 / 867, 7.0 / 289, 0.0, 0.0, 0.0, 0.0,
      0.0, 16.0 / 289, 803.0 / 1156, 0.0, 0.0, 0.0, 0.0,
      0.0, 13348.0 / 3993, -9355.0 / 3993, 0.0, 0.0, 0.0, 0.0,
      0.0, 75.0 / 154, 0.0, -3.0 / 14, 8.0 / 11, 0.0, 0.0};
  std::vector<double> b = {0.0,       -155.0 / 112, 251.0 / 80, -547.0 / 280,
                           2.0 / 3,   1.0 / 3,      1.0 / 5};
  std::vector<double> ia = {
      0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
      0.0, 1.0 / 5, 0.0, 0.0, 0.0, 0.0, 0.0,
      0.0, 2.0 / 15, 1.0 / 5, 0.0, 0.0, 0.0, 0.0,
      0.0, 7.0 / 15, 0.0, 1.0 / 5, 0.0, 0.0, 0.0,
      0.0, 1137.0 / 1004, -731.0 / 1255, 0.0, 1.0 / 5, 0.0, 0.0,
      0.0, 447.0 / 565, 0.0, -636.0 / 613, 519.0 / 496, 1.0 / 5, 0.0,
      0.0, -155.0 / 112, 251.0 / 80, -547.0 / 280, 2.0 / 3, 1.0 / 3, 1.0 / 5};
  return ButcherPair{ButcherTable::explicit_table(7, ea, b),
                     ButcherTable::implicit_table(7, ia, b), "IMEX-II-ISA3", 3};
}

bool name_matches(const ButcherPair& pair, const std::string& key, const std::string& name) {
  std::string lower;
  for (char ch : name) lower.push_back(static_cast<char>(std::tolower(ch)));
  return name == pair.name || lower == key;
}

}  // namespace

const std::vector<ButcherPair>& builtin_schemes() {
  static const std::vector<ButcherPair> schemes = {make_imex433(), make_ars443(), make_gsa3(),
                                                   make_isa3()};
  return schemes;
}

std::vector<std::string> builtin_scheme_names() { return {"imex433", "ars443", "gsa3", "isa3"}; }

const ButcherPair& builtin_scheme(const std::string& name) {
  const auto& schemes = builtin_schemes();
  const auto keys = builtin_scheme_names();
  for (size_t k = 0; k < schemes.size(); ++k)
    if (name_matches(schemes[k], keys[k], name)) return schemes[k];
  std::string valid;
  for (const auto& k : keys) valid += " " + k;
  throw MalformedTableau("unknown scheme '" + name + "'; valid names:" + valid);
}

ButcherTable classic_rk4() {
  std::vector<double> a = {
      0.0, 0.0, 0.0, 0.0,
      1.0 / 2, 0.0, 0.0, 0.0,
      0.0, 1.0 / 2, 0.0, 0.0,
      0.0, 0.0, 1.0, 0.0};
  std::vector<double> b = {1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6};
  return ButcherTable::explicit_table(4, a, b);
}

SchemeClass classify(const ButcherPair& pair) {
  const ButcherTable& im = pair.implicit_part;
  const ButcherTable& ex = pair.explicit_part;
  const int s = im.stages;

  bool diag_invertible = true;
  for (int i = 0; i < s; ++i)
    if (std::abs(im.at(i, i)) <= kTol) diag_invertible = false;

  SchemeClass cls{};
  if (diag_invertible) {
    cls.kind = SchemeKind::TypeI;
  } else {
    bool first_row_zero = true;
    for (int j = 0; j < s; ++j)
      if (std::abs(im.at(0, j)) > kTol) first_row_zero = false;
    bool hat_invertible = true;
    for (int i = 1; i < s; ++i)
      if (std::abs(im.at(i, i)) <= kTol) hat_invertible = false;
    if (!first_row_zero || !hat_invertible)
      throw MalformedTableau("implicit table is neither invertible nor of the zero-first-row "
                             "form with an invertible trailing block");
    bool a_zero = true;
    for (int i = 1; i < s; ++i)
      if (std::abs(im.at(i, 0)) > kTol) a_zero = false;
    cls.kind = (a_zero && std::abs(im.b[0]) <= kTol) ? SchemeKind::ARS : SchemeKind::TypeII;
  }

  cls.sa = true;
  for (int j = 0; j < s; ++j)
    if (std::abs(im.b[j] - im.at(s - 1, j)) > kTol) cls.sa = false;
  cls.gsa = cls.sa;
  for (int j = 0; j < s; ++j)
    if (std::abs(ex.b[j] - ex.at(s - 1, j)) > kTol) cls.gsa = false;
  return cls;
}

std::vector<double> order_condition_residuals(const ButcherTable& table, int p) {
  if (p < 1 || p > 3) throw MalformedTableau("order conditions implemented for p in {1,2,3}");
  const int s = table.stages;
  double be = 0.0, bc = 0.0, bc2 = 0.0, bac = 0.0;
  std::vector<double> ac(s, 0.0);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) ac[i] += table.at(i, j) * table.c[j];
  for (int i = 0; i < s; ++i) {
    be += table.b[i];
    bc += table.b[i] * table.c[i];
    bc2 += table.b[i] * table.c[i] * table.c[i];
    bac += table.b[i] * ac[i];
  }
  std::vector<double> res = {be - 1.0};
  if (p >= 2) res.push_back(bc - 0.5);
  if (p >= 3) {
    res.push_back(bc2 - 1.0 / 3);
    res.push_back(bac - 1.0 / 6);
  }
  return res;
}

namespace {

// Solves the trailing lower-triangular block of the implicit table against
// rhs (length s-1) by forward substitution.
std::vector<double> hat_solve(const ButcherTable& im, std::vector<double> rhs) {
  const int s = im.stages;
  std::vector<double> w(s - 1, 0.0);
  for (int i = 0; i < s - 1; ++i) {
    double sum = rhs[i];
    for (int j = 0; j < i; ++j) sum -= im.at(i + 1, j + 1) * w[j];
    w[i] = sum / im.at(i + 1, i + 1);
  }
  return w;
}

}  // namespace

NsConditionResiduals ns_condition_residuals(const ButcherPair& pair) {
  SchemeClass cls = classify(pair);
  if (cls.kind == SchemeKind::TypeI)
    throw NotTypeII("extra conditions apply to type II / ARS pairs only");
  const ButcherTable& im = pair.implicit_part;
  const ButcherTable& ex = pair.explicit_part;
  const int s = im.stages;

  std::vector<double> rhs(s - 1);
  for (int i = 1; i < s; ++i) rhs[i - 1] = im.at(i, 0) - ex.at(i, 0);
  std::vector<double> w = hat_solve(im, rhs);

  NsConditionResiduals out{0.0, 0.0};
  for (int i = 1; i < s; ++i) {
    double row = 0.0;
    for (int j = 1; j < s; ++j) row += ex.at(i, j) * w[j - 1];
    out.r1 = std::max(out.r1, std::abs(row));
  }
  double dot = 0.0;
  for (int j = 1; j < s; ++j) dot += ex.b[j] * w[j - 1];
  out.r2 = std::abs(dot);
  return out;
}

double l_stability_residual(const ButcherPair& pair) {
  const ButcherTable& im = pair.implicit_part;
  const int s = im.stages;
  SchemeClass cls = classify(pair);
  if (cls.kind == SchemeKind::TypeI) {
    std::vector<double> w(s, 0.0);
    for (int i = 0; i < s; ++i) {
      double sum = 1.0;
      for (int j = 0; j < i; ++j) sum -= im.at(i, j) * w[j];
      w[i] = sum / im.at(i, i);
    }
    double dot = 0.0;
    for (int i = 0; i < s; ++i) dot += im.b[i] * w[i];
    return std::abs(dot - 1.0);
  }
  std::vector<double> w = hat_solve(im, std::vector<double>(s - 1, 1.0));
  double dot = 0.0;
  for (int j = 1; j < s; ++j) dot += im.b[j] * w[j - 1];
  return std::abs(dot - 1.0);
}

namespace {

// R(z) by the stage recursion y = e + z A y (lower triangular solve).
double stability_function(const ButcherTable& im, double z) {
  const int s = im.stages;
  std::vector<double> y(s);
  for (int i = 0; i < s; ++i) {
    double sum = 1.0;
    for (int j = 0; j < i; ++j) sum += z * im.at(i, j) * y[j];
    y[i] = sum / (1.0 - z * im.at(i, i));
  }
  double acc = 1.0;
  for (int i = 0; i < s; ++i) acc += z * im.b[i] * y[i];
  return acc;
}

}  // namespace

AxisAmplification implicit_axis_amplification(const ButcherPair& pair, double z_min) {
  const ButcherTable& im = pair.implicit_part;
  const double z_max = -0.5;  // stiff range; R -> 1 trivially as z -> 0
  AxisAmplification out{0.0, 0.0};
  const int coarse = 4000;
  for (int k = 0; k <= coarse; ++k) {
    const double z = z_min + (z_max - z_min) * k / coarse;
    const double r = std::abs(stability_function(im, z));
    if (r > out.max_amplification) {
      out.max_amplification = r;
      out.argmax_z = z;
    }
  }
  // refine around the coarse maximum
  const double half = (z_max - z_min) / coarse;
  const double lo = out.argmax_z - half;
  const double hi = std::min(out.argmax_z + half, z_max);
  for (int k = 0; k <= 200; ++k) {
    const double z = lo + (hi - lo) * k / 200.0;
    const double r = std::abs(stability_function(im, z));
    if (r > out.max_amplification) {
      out.max_amplification = r;
      out.argmax_z = z;
    }
  }
  return out;
}

void write_tableau_report(std::ostream& os) {
  char buf[256];
  for (const auto& pair : builtin_schemes()) {
    SchemeClass cls = classify(pair);
    os << pair.name << "\n";
    std::snprintf(buf, sizeof buf, "  class: %s   SA: %s   GSA: %s   stages: %d   design order: %d\n",
                  to_string(cls.kind), cls.sa ? "yes" : "no", cls.gsa ? "yes" : "no",
                  pair.implicit_part.stages, pair.design_order);
    os << buf;
    for (const ButcherTable* t : {&pair.explicit_part, &pair.implicit_part}) {
      auto res = order_condition_residuals(*t, 3);
      std::snprintf(buf, sizeof buf,
                    "  %s order residuals: b.e-1=%.3e  b.c-1/2=%.3e  b.c^2-1/3=%.3e  bAc-1/6=%.3e\n",
                    t->kind == ButcherTable::Kind::Explicit ? "explicit" : "implicit",
                    res[0], res[1], res[2], res[3]);
      os << buf;
    }
    if (cls.sa) {
      std::snprintf(buf, sizeof buf, "  L-stability residual |b^T A^-1 e - 1| = %.3e\n",
                    l_stability_residual(pair));
      os << buf;
    }
    AxisAmplification amp = implicit_axis_amplification(pair);
    std::snprintf(buf, sizeof buf, "  max |R(z)| on [-200,-0.5]: %.4f at z = %.2f%s\n",
                  amp.max_amplification, amp.argmax_z,
                  amp.max_amplification > 1.0 ? "  (damping gap: stiff modes grow there)" : "");
    os << buf;
    if (cls.kind != SchemeKind::TypeI) {
      auto ns = ns_condition_residuals(pair);
      std::snprintf(buf, sizeof buf, "  diffusive extra conditions: r1=%.6e  r2=%.6e\n", ns.r1,
                    ns.r2);
      os << buf;
    }
    os << "\n";
  }
}

}  // namespace kinetic
