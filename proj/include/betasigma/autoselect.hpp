#pragma once

#include <string>
#include <vector>

#include "betasigma/errors.hpp"
#include "betasigma/estimators.hpp"

namespace betasigma {

/// Configuration of the iterative order/jump selection.
struct AutoSelectConfig {
  int start_order = 0;
  int start_jump = 1;
  /// Two estimates are consistent when their sigma-scaled intervals overlap:
  /// |s_a - s_b| <= consistency_sigmas * (se_a + se_b).
  double consistency_sigmas = 3.0;
  /// Hard cap on the accepted order; inputs that keep escalating beyond it
  /// are reported as non-converged instead of looping.
  int max_order = 10;
  Estimator estimator = Estimator::Robust;
  SampleMode mode = SampleMode::Independent;
  Sampling sampling = Sampling::AssumeEquidistant;
};

enum class AutoDecision { Accept, IncreaseOrder, IncreaseOrderAndJump, MaxOrderReached };

inline const char* decision_name(AutoDecision d) {
  switch (d) {
    case AutoDecision::Accept: return "accept";
    case AutoDecision::IncreaseOrder: return "increase_order";
    case AutoDecision::IncreaseOrderAndJump: return "increase_order_and_jump";
    case AutoDecision::MaxOrderReached: return "max_order_reached";
  }
  return "unknown";
}

/// One iteration of the selection loop: the estimate at (N, j) and the two
/// probe estimates at (N+1, j) and (N+1, j+1).
struct AutoTraceEntry {
  int order = 0;
  int jump = 1;
  NoiseEstimate base;
  NoiseEstimate next_order;
  NoiseEstimate next_order_jump;
  AutoDecision decision = AutoDecision::Accept;
};

struct AutoSelectResult {
  NoiseEstimate final;
  int order = 0;
  int jump = 1;
  std::vector<AutoTraceEntry> trace;
  bool converged = false;
};

namespace detail {

inline NoiseEstimate estimate_at(const SeriesData& data, int order, int jump,
                                 const AutoSelectConfig& cfg) {
  const SubsetScheme scheme = cfg.mode == SampleMode::Independent
                                  ? independent_scheme(data.size(), order, jump)
                                  : shifted_scheme(data.size(), order, jump);
  return estimate(build_beta(data, scheme, cfg.sampling), cfg.estimator);
}

inline bool consistent(const NoiseEstimate& a, const NoiseEstimate& b, double sigmas) {
  return std::abs(a.sigma_hat - b.sigma_hat) <= sigmas * (a.std_error + b.std_error);
}

}  // namespace detail

/// Iterative selection of order and jump. At each (N, j) the estimate is
/// compared against probes at (N+1, j) and (N+1, j+1); disagreement with the
/// first raises the order, disagreement with only the second raises both, and
/// agreement with both accepts the estimate at (N, j). Stops non-converged
/// once the next order would exceed max_order.
inline AutoSelectResult auto_select(const SeriesData& data, const AutoSelectConfig& cfg = {}) {
  if (cfg.start_order < 0 || cfg.start_jump < 1)
    raise(Errc::InvalidArgument, "start order/jump out of range");
  if (cfg.max_order < cfg.start_order)
    raise(Errc::InvalidArgument, "max_order must be at least start_order");
  if (!(cfg.consistency_sigmas > 0.0))
    raise(Errc::InvalidArgument, "consistency_sigmas must be positive");

  AutoSelectResult result;
  int order = cfg.start_order;
  int jump = cfg.start_jump;
  while (true) {
    AutoTraceEntry entry;
    entry.order = order;
    entry.jump = jump;
    entry.base = detail::estimate_at(data, order, jump, cfg);
    entry.next_order = detail::estimate_at(data, order + 1, jump, cfg);
    entry.next_order_jump = detail::estimate_at(data, order + 1, jump + 1, cfg);

    const bool same_jump_ok = detail::consistent(entry.base, entry.next_order, cfg.consistency_sigmas);
    const bool next_jump_ok =
        detail::consistent(entry.base, entry.next_order_jump, cfg.consistency_sigmas);

    if (same_jump_ok && next_jump_ok) {
      entry.decision = AutoDecision::Accept;
      result.trace.push_back(entry);
      result.final = entry.base;
      result.order = order;
      result.jump = jump;
      result.converged = true;
      return result;
    }
    if (order + 1 > cfg.max_order) {
      entry.decision = AutoDecision::MaxOrderReached;
      result.trace.push_back(entry);
      result.final = entry.base;
      result.order = order;
      result.jump = jump;
      result.converged = false;
      return result;
    }
    entry.decision = same_jump_ok ? AutoDecision::IncreaseOrderAndJump : AutoDecision::IncreaseOrder;
    result.trace.push_back(entry);
    order += 1;
    if (same_jump_ok) jump += 1;
  }
}

}  // namespace betasigma
