#include "shrinkflow/doubling.hpp"

#include <algorithm>
#include <cmath>

#include "shrinkflow/errors.hpp"

namespace shrinkflow {

namespace {
constexpr double kZeroFloor = 1e-12;
}

Prop31Report prop31_window_check(const TrajectorySeries& s, double tau,
                                 const GapChoice& choice, double A,
                                 double epsilon) {
  const double end = s.tau(s.tau.size() - 1);
  const double L = choice.L;
  if (tau < s.tau(0) - 1e-12 || tau + std::max(2.0 * L, 1.0) > end + 1e-12)
    throw std::out_of_range("prop31 window exceeds the trajectory span");

  Prop31Report r;
  r.d0 = series_distance_at(s, tau);
  r.dL = series_distance_at(s, tau + L);
  r.d2L = series_distance_at(s, tau + 2.0 * L);
  if (!std::isfinite(r.d0) || !std::isfinite(r.dL) || !std::isfinite(r.d2L))
    throw std::domain_error("infinite distance inside the prop31 window");
  if (r.d0 < kZeroFloor && r.dL < kZeroFloor) {
    r.degenerate = true;
    return r;
  }
  const double drop = series_excess_at(s, tau) - series_excess_at(s, tau + 1.0);
  r.lemma_hypotheses_met = (r.d0 < epsilon) && (drop < epsilon);
  r.scale_hypothesis_met = (r.dL <= std::pow(choice.L0, A));
  const double twoC0 = 2.0 * choice.C0;
  r.antecedent = (r.d0 / twoC0 <= r.dL * (1.0 + 1e-12));
  r.consequent = (r.dL / twoC0 <= r.d2L * (1.0 + 1e-12));
  r.margin = r.d2L - r.dL / twoC0;
  r.violated = r.lemma_hypotheses_met && r.scale_hypothesis_met && r.antecedent &&
               !r.consequent;
  return r;
}

DoublingAudit theorem11_certificate(const TrajectorySeries& s, double L0,
                                    double A, double C0, double epsilon) {
  if (!(L0 > 0.0 && L0 < 0.5)) throw std::invalid_argument("L0 must lie in (0, 1/2)");
  if (!(A > 0.0)) throw std::invalid_argument("A must be positive");
  if (!(C0 > 1.0)) throw std::invalid_argument("C0 must exceed 1");

  DoublingAudit audit;
  audit.C0 = C0;
  audit.A = A;
  audit.L0 = L0;
  const double q = std::pow(0.5, 1.0 / A);
  audit.scale_series_total = L0 / (1.0 - q);

  const double start = s.tau(0);
  const double end = s.tau(s.tau.size() - 1);
  const double first_three = L0 * (1.0 + q + q * q);
  if (end - start < first_three)
    throw std::invalid_argument("trajectory too short for three scale stages");

  for (Eigen::Index i = 0; i < s.dist.size(); ++i) {
    if (!std::isfinite(s.dist(i))) {
      audit.verdict = "partial";
    }
  }

  const double sample_step = (end - start) / (s.tau.size() - 1);
  auto window_sup_ratio = [&](double from) {
    double sup = 0.0;
    bool any = false;
    for (Eigen::Index i = 0; i < s.tau.size(); ++i) {
      const double t = s.tau(i);
      if (t < from - 1e-12 || t + 1.0 > end + 1e-12) continue;
      const double d0 = s.dist(i);
      const double d1 = series_distance_at(s, t + 1.0);
      if (!std::isfinite(d0) || !std::isfinite(d1)) continue;
      if (d0 < kZeroFloor || d1 < kZeroFloor) continue;
      sup = std::max(sup, d0 / d1);
      any = true;
    }
    return any ? sup : 0.0;
  };
  audit.doubling_constant = window_sup_ratio(start);

  double T = start;
  const int kScan = 256;
  for (int stage = 0; stage < 500; ++stage) {
    const double Li = std::pow(q, stage) * L0;
    if (T + std::max(2.0 * Li, 1.0) > end + 1e-12) {
      audit.verdict = audit.verdict.empty() ? "exhausted" : audit.verdict;
      break;
    }
    const double dT = series_distance_at(s, T);
    if (!std::isfinite(dT)) {
      audit.verdict = "partial";
      break;
    }
    if (dT < kZeroFloor) {
      audit.verdict = "zero";
      break;
    }

    DoublingAudit::Stage st;
    st.index = stage;
    st.T = T;
    st.Li = Li;

    bool found_decay = false;
    for (int j = 0; j < kScan; ++j) {
      const double L = 0.5 * Li + 0.5 * Li * j / (kScan - 1);
      const double dTL = series_distance_at(s, T + L);
      if (!std::isfinite(dTL)) continue;
      // run the frequency implication at this window when it fits the span
      if (T + std::max(2.0 * L, 1.0) <= end + 1e-12) {
        GapChoice pseudo;
        pseudo.L = L;
        pseudo.L0 = L0;
        pseudo.C0 = C0;
        const Prop31Report pr = prop31_window_check(s, T, pseudo, A, epsilon);
        if (!pr.degenerate) {
          ++audit.prop31_windows;
          if (pr.violated) ++audit.prop31_violations;
        }
      }
      if (!found_decay && dT >= 2.0 * C0 * dTL) {
        found_decay = true;
        st.L_used = L;
      }
    }
    st.decay_branch = found_decay;

    if (found_decay) {
      const double dTLi = series_distance_at(s, T + Li);
      st.bound = 0.5 * std::pow(Li, A);
      st.bound_holds = std::isfinite(dTLi) && (dTLi <= st.bound + 1e-15) &&
                       (dT <= std::pow(Li, A));
      audit.stages.push_back(st);
      T += Li;
      continue;
    }

    // bounded-ratio branch: every L in [Li/2, Li] kept the ratio below 2C0.
    audit.stages.push_back(st);
    audit.bounded_branch = true;
    audit.chain_m = static_cast<int>(std::ceil((1.0 + L0) / (0.5 * Li))) + 1;
    audit.chain_constant = std::pow(2.0 * C0, audit.chain_m) * C0 * C0;
    const double sup_rest = window_sup_ratio(T);
    audit.chain_bounds_ratios = (sup_rest <= audit.chain_constant);
    audit.verdict = "bounded";
    break;
  }
  if (audit.verdict.empty()) audit.verdict = "exhausted";
  (void)sample_step;
  return audit;
}

std::optional<double> doubling_constant(const TrajectorySeries& s) {
  const double end = s.tau(s.tau.size() - 1);
  double sup = 0.0;
  bool any = false;
  for (Eigen::Index i = 0; i < s.tau.size(); ++i) {
    const double t = s.tau(i);
    if (t + 1.0 > end + 1e-12) break;
    const double d0 = s.dist(i);
    const double d1 = series_distance_at(s, t + 1.0);
    if (!std::isfinite(d0) || !std::isfinite(d1))
      throw std::domain_error("doubling_constant needs finite distances");
    if (d0 < kZeroFloor || d1 < kZeroFloor) return std::nullopt;
    sup = std::max(sup, d0 / d1);
    any = true;
  }
  if (!any) return std::nullopt;
  return sup;
}

OrderClassification infinite_order_classifier(const TrajectorySeries& s, int K) {
  if (K < 1) throw std::invalid_argument("need at least one order to classify");
  const double start = s.tau(0);
  const double end = s.tau(s.tau.size() - 1);
  if (end - start < 2.0)
    throw std::invalid_argument("span too short to classify orders up to K");

  OrderClassification out;
  out.max_order_checked = K;
  double dmax = 0.0;
  for (Eigen::Index i = 0; i < s.dist.size(); ++i) {
    if (std::isfinite(s.dist(i))) dmax = std::max(dmax, s.dist(i));
  }
  if (dmax < kZeroFloor) {
    out.zero = true;
    out.verdict = "zero";
    return out;
  }

  const double mid = 0.5 * (start + end);
  out.C_half.resize(K);
  out.C_full.resize(K);
  int last_stable = 0;
  bool diverged = false;
  for (int k = 1; k <= K; ++k) {
    double ch = 0.0, cf = 0.0;
    for (Eigen::Index i = 0; i < s.tau.size(); ++i) {
      if (!std::isfinite(s.dist(i))) continue;
      const double v = s.dist(i) * std::exp(k * (s.tau(i) - start));
      cf = std::max(cf, v);
      if (s.tau(i) <= mid + 1e-12) ch = std::max(ch, v);
    }
    out.C_half[k - 1] = ch;
    out.C_full[k - 1] = cf;
    const bool stable = (ch > 0.0) && (cf <= 1.2 * ch);
    if (!diverged && stable) last_stable = k;
    if (!stable) diverged = true;
  }
  out.finite_order = last_stable;
  out.all_stable = !diverged;
  out.verdict = out.all_stable ? "order-above-K" : "finite-order";
  return out;
}

}  // namespace shrinkflow
