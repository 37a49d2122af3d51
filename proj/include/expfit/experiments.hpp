#pragma once

#include <string>

#include "expfit/config.hpp"
#include "expfit/decouple.hpp"
#include "expfit/exppoly.hpp"

namespace expfit {

/// Outcome of one CLI run. The CSV is a pure function of the effective
/// configuration (including the seed), independent of thread count.
/// exit_code: 0 success, 2 config error (thrown as ConfigError before any CSV
/// exists), 3 certificate failure (omega = 0 while require_certificate=true).
struct RunResult {
  std::string csv;
  int exit_code = 0;
  std::string message;
};

RunResult run_span(const Config& cfg);
RunResult run_bounds(const Config& cfg);
RunResult run_fit(const Config& cfg);
RunResult run_decouple(const Config& cfg);
RunResult run_exp1(const Config& cfg);
RunResult run_exp2(const Config& cfg);
RunResult run_example3(const Config& cfg);

/// Dispatch by subcommand name; throws ConfigError for unknown names.
RunResult run_subcommand(const std::string& name, const Config& cfg);

/// Feasible random truth used by the experiment harness: frequencies uniform
/// on [-lambda, lambda] conditioned on pairwise gaps >= gap, amplitude moduli
/// uniform on [0.5, 2] with uniform phase.
ExpPoly random_truth(std::uint64_t seed, int n_terms, double lambda, double gap);

/// The worked-example mixture at maximal frequency eta in (0, 1]: BOX and
/// DELTAPAIR, two shifts -+eta/(2*pi) each, amplitudes solved from the null
/// condition at the first sampling point of each W_j. At eta = 1 every
/// decoupled right-hand side vanishes identically; below 1 the mixture is
/// recoverable.
ShiftMixture example3_mixture(double eta);

/// First m points of W_1 = {(1/2+n)pi} and W_2 = {pi n, n >= 1}, computed
/// through common_zero_set.
std::pair<std::vector<double>, std::vector<double>> example3_sets(int m);

}  // namespace expfit
