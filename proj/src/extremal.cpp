#include "dirlab/extremal.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace dirlab {

double cotype_of(const CoefficientSpaceSpec& space) {
  if (space.is_scalar()) return 2.0;
  if (space.kind == CoefficientSpaceSpec::Kind::vector) {
    if (std::isinf(space.q)) return kInf;
    return std::max(space.q, 2.0);
  }
  throw std::domain_error("cotype_of: unsupported space");
}

std::vector<double> default_q_schedule(double cotype, std::size_t blocks) {
  if (std::isinf(cotype)) throw std::domain_error("default_q_schedule: finite cotype needed");
  std::vector<double> qs(blocks);
  for (std::size_t m = 0; m < blocks; ++m)
    qs[m] = cotype - (cotype - 1.0) / std::pow(2.0, double(m));
  return qs;
}

std::string BlockPlan::to_json() const {
  nlohmann::json j;
  j["q_schedule"] = q_schedule;
  j["mass_target"] = mass_target;
  j["blocks"] = nlohmann::json::array();
  for (std::size_t m = 0; m < blocks.size(); ++m) {
    nlohmann::json b;
    b["m"] = m + 1;
    b["q"] = q_schedule[m];
    b["primes"] = blocks[m];
    b["mass_sum"] = mass_sums[m];
    b["power_sum"] = power_sums[m];
    b["power_bound"] = power_bounds[m];
    j["blocks"].push_back(std::move(b));
  }
  return j.dump(2);
}

BlockPlan build_blocks(std::span<const double> q_schedule, std::uint64_t prime_budget,
                       double mass_target, const PrimeTable& primes) {
  if (q_schedule.empty()) throw std::domain_error("build_blocks: empty q schedule");
  for (std::size_t m = 1; m < q_schedule.size(); ++m)
    if (!(q_schedule[m] > q_schedule[m - 1]))
      throw std::domain_error("build_blocks: q schedule must be strictly increasing");
  if (!(mass_target > 0.0 && mass_target <= 1.0))
    throw std::domain_error("build_blocks: mass_target in (0, 1]");
  if (prime_budget > primes.bound())
    throw std::domain_error("build_blocks: prime budget exceeds the table bound");

  BlockPlan plan;
  plan.mass_target = mass_target;

  std::size_t next = 1; // 1-based prime index
  for (std::size_t m = 0; m < q_schedule.size(); ++m) {
    const double qm = q_schedule[m];
    const double expo = 1.0 + qm / double(m + 1);
    const double bound = std::pow(2.0, -qm / double(m + 1));

    std::vector<std::uint64_t> block;
    double mass = 0.0, power = 0.0;
    while (mass < mass_target) {
      if (next > primes.size() || primes.nth_prime(next) > prime_budget) {
        plan.q_schedule.resize(plan.blocks.size());
        throw PartialPlanError(
            "build_blocks: prime budget exhausted in block " + std::to_string(m + 1) +
                " (" + std::to_string(plan.blocks.size()) + " blocks completed, mass " +
                std::to_string(mass) + " of " + std::to_string(mass_target) + ")",
            plan);
      }
      const std::uint64_t p = primes.nth_prime(next++);
      block.push_back(p);
      mass += 1.0 / double(p);
      power += std::pow(double(p), -expo);
    }
    if (!(power < bound))
      throw std::runtime_error("build_blocks: power clause violated in block " +
                               std::to_string(m + 1) + ": sum " + std::to_string(power) +
                               " !< " + std::to_string(bound));
    plan.q_schedule.push_back(qm);
    plan.blocks.push_back(std::move(block));
    plan.mass_sums.push_back(mass);
    plan.power_sums.push_back(power);
    plan.power_bounds.push_back(bound);
  }
  return plan;
}

DirichletTruncation build_eco(const CoefficientSpaceSpec& space, const BlockPlan& plan,
                              const PrimeTable& primes) {
  if (space.is_scalar())
    throw std::domain_error("build_eco: vector-kind space needed");
  std::size_t total = 0;
  for (const auto& b : plan.blocks) total += b.size();
  if (space.dim < total)
    throw std::domain_error("build_eco: dim " + std::to_string(space.dim) +
                            " smaller than the plan's prime count " + std::to_string(total));

  std::uint64_t n_max = 1;
  for (const auto& b : plan.blocks)
    if (!b.empty()) n_max = std::max(n_max, b.back());
  DirichletTruncation D(space, std::max<std::uint64_t>(n_max, 2));

  std::uint32_t slot = 0; // iota enumeration of the support primes
  for (std::size_t m = 0; m < plan.blocks.size(); ++m) {
    const double qm = plan.q_schedule[m];
    for (const std::uint64_t p : plan.blocks[m]) {
      const double scale = std::pow(double(p), -1.0 / qm);
      D.set(p, Coefficient::basis(slot++, cplx{scale, 0}));
    }
  }
  (void)primes;
  return D;
}

GapReport verify_gap(const DirichletTruncation& D, const CoefficientSpaceSpec& space,
                     const BlockPlan& plan, int sign_trials, std::uint64_t seed,
                     const EstimatorParams& params, const PrimeTable& primes) {
  GapReport rep;
  const double cot = cotype_of(space);
  rep.predicted_gap = std::isinf(cot) ? 1.0 : 1.0 - 1.0 / cot;
  rep.mass_target_used = plan.mass_target;
  rep.space_name = space.name();

  const auto schedule = dyadic_schedule(D.n_max());
  rep.sigma_a_est =
      bohr_cahen(D, NormTag::make(NormTag::Family::ell1), schedule, params, primes);
  rep.sigma_unc_est = unconditional_abscissa(D, SignStrategy::random, sign_trials, seed,
                                             schedule, params, primes);
  return rep;
}

} // namespace dirlab
