#include "regkit/metrics.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace regkit {

namespace {

struct Merged {
  std::vector<double> x;
  std::vector<double> s;  // p mass minus q mass
};

Merged merge(const DiscreteLaw& p, const DiscreteLaw& q) {
  const auto& xp = p.support();
  const auto& xq = q.support();
  Merged m;
  m.x.reserve(xp.size() + xq.size());
  m.s.reserve(xp.size() + xq.size());
  std::size_t i = 0, j = 0;
  while (i < xp.size() || j < xq.size()) {
    if (j == xq.size() || (i < xp.size() && xp[i] < xq[j])) {
      m.x.push_back(xp[i]);
      m.s.push_back(p.probs()[i++]);
    } else if (i == xp.size() || xq[j] < xp[i]) {
      m.x.push_back(xq[j]);
      m.s.push_back(-q.probs()[j++]);
    } else {
      m.x.push_back(xp[i]);
      m.s.push_back(p.probs()[i++] - q.probs()[j++]);
    }
  }
  return m;
}

struct Kink {
  double pos;
  double amount;
};
struct KinkLess {
  bool operator()(const Kink& a, const Kink& b) const { return a.pos < b.pos; }
};
struct KinkGreater {
  bool operator()(const Kink& a, const Kink& b) const { return a.pos > b.pos; }
};

}  // namespace

double bl_distance(const DiscreteLaw& p, const DiscreteLaw& q) {
  if (p.size() == 0 || q.size() == 0) throw std::domain_error("bl_distance: empty support");
  const Merged m = merge(p, q);
  constexpr double inf = std::numeric_limits<double>::infinity();

  // V(f) = best objective over f_1..f_i with f_i = f. Concave; stored as the
  // plateau of maximizers plus kinks on each side (left: max-heap, right:
  // min-heap) with lazy position offsets. x is a point of the plateau.
  std::priority_queue<Kink, std::vector<Kink>, KinkLess> left;
  std::priority_queue<Kink, std::vector<Kink>, KinkGreater> right;
  double off_left = 0.0, off_right = 0.0;
  left.push({-1.0, inf});
  right.push({1.0, inf});
  double x = 0.0, best = 0.0;

  for (std::size_t i = 0; i < m.x.size(); ++i) {
    if (i > 0) {
      const double d = m.x[i] - m.x[i - 1];
      off_left -= d;
      off_right += d;
      left.push({-1.0 - off_left, inf});
      right.push({1.0 - off_right, inf});
    }
    double c = m.s[i];
    best += c * x;
    while (c > 0.0) {
      Kink k = right.top();
      right.pop();
      const double pos = k.pos + off_right;
      best += c * (pos - x);
      x = pos;
      if (k.amount <= c) {
        left.push({pos - off_left, k.amount});
        c -= k.amount;
      } else {
        left.push({pos - off_left, c});
        right.push({k.pos, k.amount - c});
        c = 0.0;
      }
    }
    while (c < 0.0) {
      Kink k = left.top();
      left.pop();
      const double pos = k.pos + off_left;
      best += c * (pos - x);
      x = pos;
      if (k.amount <= -c) {
        right.push({pos - off_right, k.amount});
        c += k.amount;
      } else {
        right.push({pos - off_right, -c});
        left.push({k.pos, k.amount + c});
        c = 0.0;
      }
    }
  }
  return std::max(best, 0.0);
}

double w1_distance(const DiscreteLaw& p, const DiscreteLaw& q) {
  if (p.size() == 0 || q.size() == 0) throw std::domain_error("w1_distance: empty support");
  const Merged m = merge(p, q);
  double cdf_diff = 0.0, total = 0.0;
  for (std::size_t i = 0; i + 1 < m.x.size(); ++i) {
    cdf_diff += m.s[i];
    total += std::abs(cdf_diff) * (m.x[i + 1] - m.x[i]);
  }
  return total;
}

DiscreteLaw empirical_measure(const EmpiricalSample& sample) {
  auto v = sample.values();
  if (sample.uniform_weights()) return DiscreteLaw::uniform_over({v.begin(), v.end()});
  return DiscreteLaw({v.begin(), v.end()}, {sample.weights().begin(), sample.weights().end()});
}

}  // namespace regkit
