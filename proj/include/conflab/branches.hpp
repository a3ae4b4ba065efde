#pragma once

#include <utility>
#include <vector>

namespace conflab {

/// Reduced Yamabe equation on S^1(L) x S^{n-1} for u = u(t):
/// u'' = a u - u^p with a = (n-2)^2/4, p = (n+2)/(n-2), and conserved
/// E = u'^2/2 + V(u), V(u) = -a u^2/2 + ((n-2)/(2n)) u^{2n/(n-2)}.
class ReducedOde {
 public:
  explicit ReducedOde(int n);

  int dim() const { return n_; }
  double a() const { return a_; }
  double p() const { return p_; }
  double force(double u) const;
  double potential(double u) const;
  double energy(double u, double du) const { return 0.5 * du * du + potential(u); }
  /// Potential at the constant solution (bottom of the well).
  double center_energy() const;
  /// 2 pi / sqrt(n - 2).
  double center_period() const;
  /// Turning points u_min < u_0 < u_max of the orbit at energy E.
  std::pair<double, double> turning_points(double E) const;

 private:
  int n_;
  double a_;
  double p_;
};

/// u_0 = ((n-2)^2/4)^{(n-2)/4}.
double constant_solution(int n);

/// T(E) = 2 int du / sqrt(2(E - V(u))) between the turning points, with the
/// inverse square-root endpoint singularities handled by the quadrature
/// weight. Throws unless center_energy < E < 0.
double period_map(int n, double E);

/// Orbit sampled on a uniform mesh over [0, length), starting at the maximum
/// with u' = 0, by Stormer-Verlet composed to sixth order.
struct Trajectory {
  std::vector<double> u;
  std::vector<double> du;
  double step = 0.0;
  /// max |E(t) - E(0)|.
  double energy_drift = 0.0;
  /// |u(length) - u(0)| + |u'(length) - u'(0)|.
  double closure = 0.0;
};
Trajectory integrate_orbit(int n, double u_max, double length, int steps);

struct BranchRecord {
  /// 0 for the constant solution.
  int multiplicity = 0;
  double amplitude = 0.0;
  double minimum = 0.0;
  double period = 0.0;
  double length = 0.0;
  double energy_level = 0.0;
  /// F on S^1(length) x S^{n-1}.
  double functional = 0.0;
  /// max |-u'' + a u - u^p| with u'' spectral on the circle.
  double pde_residual = 0.0;
  double energy_drift = 0.0;
  /// max |u(t) - u(-t)| about the maximum.
  double reversal_error = 0.0;
  int class_id = 0;
};

struct BranchOptions {
  int steps_per_period = 4096;
  int scan_levels = 50;
};

struct BranchSet {
  int n = 0;
  double length = 0.0;
  std::vector<BranchRecord> records;
  /// T strictly increasing over the energy scan; when false the count is
  /// only a lower bound.
  bool monotone_scan_passed = false;
  int nonconstant_classes() const { return static_cast<int>(records.size()) - 1; }
};

/// Energy levels E_j spread over (center, 0) and the period at each.
struct PeriodScan {
  std::vector<double> energies;
  std::vector<double> periods;
  bool strictly_increasing = false;
};
PeriodScan period_scan(int n, int levels);

/// Energy level with T(E) = period, by Brent's method.
double solve_period(int n, double period);

/// One branch with minimal period length / m on S^1(length).
BranchRecord solve_branch(int n, double length, int m, const BranchOptions& opt = {});
BranchRecord constant_branch(int n, double length, const BranchOptions& opt = {});

/// Constant record plus one record per m >= 1 with length / m > 2 pi / sqrt(n - 2).
BranchSet count_branches(int n, double length, const BranchOptions& opt = {});

struct CoveringReport {
  int d = 1;
  double f_base = 0.0;
  double f_cover = 0.0;
  double ratio = 0.0;
  double expected = 0.0;
  double relative_error = 0.0;
  /// The pulled-back solution matches the multiplicity-d class on S^1(dL).
  bool found_in_cover = false;
};

/// F of the m = 1 solution on S^1(L) against F of the multiplicity-d class
/// on S^1(dL); the expected ratio is d^{2/n}.
CoveringReport covering_energy_check(int n, double length, int d, const BranchOptions& opt = {});

/// F of the m = 1, 2, ... classes at fixed length followed by the constant,
/// and whether the sequence is strictly increasing.
struct EnergyChain {
  std::vector<double> values;
  bool strictly_increasing = false;
};
EnergyChain energy_chain(int n, double length, const BranchOptions& opt = {});

}  // namespace conflab
