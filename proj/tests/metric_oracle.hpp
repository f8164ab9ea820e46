#pragma once

// Reference metric implementations that recount from scratch for each
// quantity, written without reusing the library's tallies.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oracle {

struct Counts {
  double tp = 0, fp = 0, fn = 0, tn = 0;
};

inline Counts count(const std::vector<int>& t, const std::vector<int>& p, int pos) {
  Counts c;
  for (std::size_t i = 0; i < t.size(); ++i) {
    c.tp += (t[i] == pos) && (p[i] == pos);
    c.fp += (t[i] != pos) && (p[i] == pos);
    c.fn += (t[i] == pos) && (p[i] != pos);
    c.tn += (t[i] != pos) && (p[i] != pos);
  }
  return c;
}

inline double f1(const Counts& c) { return c.tp == 0 ? 0.0 : 2 * c.tp / (2 * c.tp + c.fp + c.fn); }

inline double macro_f1(const std::vector<int>& t, const std::vector<int>& p) {
  return (f1(count(t, p, 1)) + f1(count(t, p, 0))) / 2;
}

struct GroupRate {
  std::optional<double> tpr, fpr;
};

inline std::map<std::string, GroupRate> rates(const std::vector<int>& t, const std::vector<int>& p,
                                              const std::vector<std::string>& g) {
  std::map<std::string, GroupRate> out;
  for (const std::string& name : std::set<std::string>(g.begin(), g.end())) {
    double pos = 0, neg = 0, tp = 0, fp = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (g[i] != name) continue;
      (t[i] ? pos : neg) += 1;
      if (t[i] && p[i]) tp += 1;
      if (!t[i] && p[i]) fp += 1;
    }
    GroupRate r;
    if (pos > 0) r.tpr = tp / pos;
    if (neg > 0) r.fpr = fp / neg;
    out[name] = r;
  }
  return out;
}

// Smallest pairwise ratio r_a / r_b over ordered pairs with r_b > 0; a set
// whose rates are all zero is perfectly balanced.
inline double pairwise_ratio(const std::vector<double>& r) {
  double best = 1.0;
  for (double a : r)
    for (double b : r)
      if (b > 0) best = std::min(best, a / b);
  return best;
}

// nullopt when no group defines a TPR or no group defines an FPR.
inline std::optional<double> equalized_odds(const std::map<std::string, GroupRate>& rs) {
  std::vector<double> tprs, fprs;
  for (const auto& [name, r] : rs) {
    if (r.tpr) tprs.push_back(*r.tpr);
    if (r.fpr) fprs.push_back(*r.fpr);
  }
  if (tprs.empty() || fprs.empty()) return std::nullopt;
  return std::min(pairwise_ratio(tprs), pairwise_ratio(fprs));
}

}  // namespace oracle
