#include "selftest.hpp"

#include <cmath>
#include <numbers>
#include <functional>
#include <string>

#include "regkit/bootkn.hpp"
#include "regkit/isd.hpp"
#include "regkit/mest.hpp"
#include "regkit/metrics.hpp"
#include "regkit/npiv.hpp"
#include "regkit/selector.hpp"

using namespace regkit;

namespace {

struct Runner {
  std::ostream& out;
  int failures = 0;

  void check(const std::string& name, const std::function<bool()>& f) {
    bool ok = false;
    try {
      ok = f();
    } catch (const std::exception& e) {
      out << "  exception: " << e.what() << '\n';
    }
    out << (ok ? "ok   " : "FAIL ") << name << '\n';
    if (!ok) ++failures;
  }
};

bool near(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

}  // namespace

int run_selftest(std::ostream& out) {
  Runner t{out};
  const auto d0 = DiscreteLaw::point_mass(0.0);
  t.check("bl(δ0, δ0) = 0", [&] { return near(bl_distance(d0, d0), 0.0); });
  t.check("bl(δ0, δ1) = 1", [&] { return near(bl_distance(d0, DiscreteLaw::point_mass(1.0)), 1.0); });
  t.check("bl(δ0, δ5) = 2", [&] { return near(bl_distance(d0, DiscreteLaw::point_mass(5.0)), 2.0); });
  t.check("w1(δ0, δ1) = 1", [&] { return near(w1_distance(d0, DiscreteLaw::point_mass(1.0)), 1.0); });
  t.check("w1(U{0,2}, δ1) = 1",
          [&] { return near(w1_distance(DiscreteLaw({0.0, 2.0}, {0.5, 0.5}), DiscreteLaw::point_mass(1.0)), 1.0); });
  t.check("empirical_measure([0,0,1])", [&] {
    auto law = empirical_measure(EmpiricalSample({0.0, 0.0, 1.0}));
    return law.size() == 2 && near(law.probs()[0], 2.0 / 3.0) && near(law.probs()[1], 1.0 / 3.0);
  });

  t.check("acceptance_set on a singleton grid", [&] {
    FunctionFamily f([](double, const EmpiricalSample&) { return ParameterValue(0.0); });
    std::vector<double> a{0.0};
    return acceptance_set(f, EmpiricalSample({0.0}), TuningGrid({1.0}), a) == std::vector<double>{1.0};
  });
  t.check("oracle_select with zero bias picks min k", [&] {
    RateEnvelope env;
    env.sampling = [](double k, std::size_t) { return 0.01 * k; };
    env.bias = [](double) { return 0.0; };
    return oracle_select(TuningGrid::integers(1, 100), env, 100) == 1.0;
  });

  t.check("isd two-point sample, k = 1", [&] {
    KernelSpec k;
    return near(isd_estimate(k, 1.0, EmpiricalSample({0.0, 0.0})), 1.0 / std::sqrt(2.0 * std::numbers::pi));
  });
  t.check("isd influence sums to zero", [&] {
    KernelSpec k;
    auto inf = isd_influence(k, 2.0, EmpiricalSample({0.1, 0.7, -1.2, 0.4}));
    double s = 0.0;
    for (double v : inf.values) s += v;
    return near(s, 0.0, 1e-14);
  });

  t.check("boot_statistic(1, 0.5, 4) = 1", [] { return near(boot_statistic(1.0, 0.5, 4.0), 1.0); });
  t.check("boot_law on a one-point sample is δ0", [] {
    auto law = boot_law(EmpiricalSample({3.0}), 2, 50, 7);
    return law.law().size() == 1 && law.law().support()[0] == 0.0;
  });

  t.check("npiv constant basis gives the sample mean", [] {
    EmpiricalSample s({1.0, 0.2, 0.3, 2.0, 0.5, 0.1, 4.0, 0.9, 0.7}, 3);
    auto fit = npiv_sieve_fit(s, SieveBasis{BasisFamily::Cosine, 1, 1});
    return near(fit.coefficients[0], 7.0 / 3.0);
  });

  t.check("mest constant basis gives the sample mean", [] {
    EmpiricalSample s({1.0, 0.1, 2.0, 0.5, 6.0, 0.9}, 2);
    auto fit = mest_fit(s, BasisFamily::Cosine, 1, LossSpec{});
    return near(fit.coefficients[0], 3.0, 1e-10) && near(fit.Delta(0, 0), 2.0, 1e-12);
  });

  out << (t.failures == 0 ? "selftest passed" : "selftest FAILED") << '\n';
  return t.failures;
}
