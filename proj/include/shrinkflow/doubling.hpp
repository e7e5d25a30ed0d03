#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shrinkflow/drift_heat.hpp"
#include "shrinkflow/flow.hpp"

namespace shrinkflow {

/// Frequency-monotonicity implication on one window:
/// if D(tau)/(2C0) <= D(tau+L) then D(tau+L)/(2C0) <= D(tau+2L),
/// under the semi-continuity hypotheses and D(tau+L) <= L0^A.
struct Prop31Report {
  bool lemma_hypotheses_met = false; ///< D(tau) < eps and unit-time excess drop < eps
  bool scale_hypothesis_met = false; ///< D(tau+L) <= L0^A
  bool antecedent = false;           ///< D(tau)/(2C0) <= D(tau+L)
  bool consequent = false;           ///< D(tau+L)/(2C0) <= D(tau+2L)
  bool violated = false;             ///< antecedent true, consequent false
  bool degenerate = false;           ///< zero distance in the window
  double d0 = 0.0, dL = 0.0, d2L = 0.0;
  double margin = 0.0;               ///< D(tau+2L) - D(tau+L)/(2C0)
};
Prop31Report prop31_window_check(const TrajectorySeries& s, double tau,
                                 const GapChoice& choice, double A,
                                 double epsilon);

/// Result of running the shrinking-scale iteration of the doubling theorem
/// on a concrete trajectory.
struct DoublingAudit {
  double C0 = 0.0, A = 0.0, L0 = 0.0;
  struct Stage {
    int index = 0;
    double T = 0.0;            ///< window start
    double Li = 0.0;           ///< scale at this stage
    bool decay_branch = false; ///< some L in [Li/2, Li] had D(T) >= 2C0 D(T+L)
    double L_used = 0.0;       ///< the witness L (decay branch)
    double bound = 0.0;        ///< claimed D(T+Li) <= Li^A / 2 (decay branch)
    bool bound_holds = false;
  };
  std::vector<Stage> stages;
  double scale_series_total = 0.0;  ///< L0 / (1 - 2^{-1/A})
  bool bounded_branch = false;      ///< iteration ended in the bounded-ratio case
  int chain_m = 0;                  ///< steps in the chaining argument
  double chain_constant = 0.0;      ///< (2C0)^m C0^2
  double doubling_constant = 0.0;   ///< sup_tau D(tau)/D(tau+1) on the audited span
  bool chain_bounds_ratios = false; ///< chain constant dominates every sampled ratio
  long prop31_windows = 0;          ///< implication checks run during the scans
  long prop31_violations = 0;
  std::string verdict;              ///< "bounded" | "zero" | "exhausted" | "partial"
};

/// Executes the iteration with scales L_i = 2^{-i/A} L0 scanning 256
/// candidates per stage, recording branch history, the chaining constant
/// when the bounded-ratio branch fires, and the doubling constant estimate.
DoublingAudit theorem11_certificate(const TrajectorySeries& s, double L0,
                                    double A, double C0, double epsilon);

/// sup over sampled tau of D(tau)/D(tau+1); degenerate (zero) distances are
/// reported through the optional.
std::optional<double> doubling_constant(const TrajectorySeries& s);

/// Vanishing-order classification: fits C_k = sup_tau D(tau) e^{k tau} on the
/// first half and the full span; k* is the last k whose fit is stable.
struct OrderClassification {
  bool zero = false;            ///< all samples below the zero floor 1e-12
  int finite_order = 0;         ///< k*; 0 when even k = 1 diverges
  int max_order_checked = 0;
  bool all_stable = false;      ///< no divergence seen up to K: order > K
  std::vector<double> C_half;
  std::vector<double> C_full;
  std::string verdict;          ///< "zero" | "finite-order" | "order-above-K"
};
OrderClassification infinite_order_classifier(const TrajectorySeries& s, int K);

}  // namespace shrinkflow
