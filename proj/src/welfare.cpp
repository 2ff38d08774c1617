#include "capgame/welfare.hpp"

#include <cmath>
#include <future>
#include <limits>

#include "capgame/wardrop.hpp"

namespace capgame {

double social_cost(const Instance &instance, const Profile &profile) {
  validate_profile(instance, profile);
  if (!profile.any_capacity()) return std::numeric_limits<double>::infinity();
  const WardropOutcome w = wardrop_flow(instance, profile);
  double total = 0.0;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const Strategy &s = profile[i];
    if (s.z <= 0.0) continue;
    const FirmParams &f = instance.params(i);
    const double x = w.x[i];
    total += (f.a * x / s.z + f.b) * x + f.gamma * s.z;
  }
  return total;
}

SocialOptimum social_optimum(const Instance &instance) {
  SocialOptimum best;
  best.value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const FirmParams &f = instance.params(i);
    const double unit_cost = 2.0 * f.sqrt_a_gamma() + f.b;
    if (unit_cost < best.value) {
      best.value = unit_cost;
      best.firm = i;
    }
  }
  const double d = instance.demand;
  best.value *= d;
  best.witness.strategies.assign(instance.size(), Strategy{0.0, 0.0});
  const FirmParams &f = instance.params(best.firm);
  best.witness[best.firm].z = d * std::sqrt(f.a / f.gamma);
  return best;
}

WelfareReport poa(const Instance &instance) {
  WelfareReport report;
  report.equilibrium = solve_equilibrium(instance);
  report.equilibrium_cost =
      social_cost(instance, report.equilibrium.profile());
  report.optimum = social_optimum(instance);
  report.ratio = report.equilibrium_cost / report.optimum.value;
  return report;
}

Instance gm_instance(double M) {
  if (!(M >= 1.0) || !std::isfinite(M)) {
    throw Error(ErrorCode::MOutOfRange, "the G_M family requires M >= 1");
  }
  Instance inst;
  inst.firms.push_back({"1", {1.0, 0.0, 1.0, 1.0}});
  inst.firms.push_back({"2", {M, 0.0, M, M}});
  return inst;
}

double gm_equilibrium_cost(double M) {
  return M + 1.0 + std::sqrt(M * M - M + 1.0);
}

std::vector<SweepRow> sweep_gm(std::span<const double> m_values) {
  std::vector<std::future<SweepRow>> jobs;
  jobs.reserve(m_values.size());
  for (double M : m_values) {
    Instance inst = gm_instance(M);
    jobs.push_back(std::async(std::launch::async, [M, inst = std::move(inst)] {
      const WelfareReport r = poa(inst);
      return SweepRow{M, r.equilibrium.K, r.equilibrium_cost, r.optimum.value,
                      r.ratio};
    }));
  }
  std::vector<SweepRow> rows;
  rows.reserve(jobs.size());
  for (auto &job : jobs) rows.push_back(job.get());
  return rows;
}

} // namespace capgame
