#include "fkt/kernels.hpp"

#include <cmath>

namespace fkt {
namespace {

double param(const IsotropicKernel::Params& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void checkParams(const std::string& name, const IsotropicKernel::Params& given,
                 std::initializer_list<const char*> known) {
  for (const auto& [key, value] : given) {
    (void)value;
    bool ok = false;
    for (const char* k : known)
      if (key == k) ok = true;
    if (!ok) throw std::invalid_argument("kernel '" + name + "': unknown parameter '" + key + "'");
  }
}

// Exact rational image of a double parameter; doubles are dyadic rationals so
// this is lossless and keeps recurrences consistent with the float evaluator.
Rational exactOf(double x) { return Rational(x); }

template <class Eval, class JetEval>
KernelPtr build(std::string name, IsotropicKernel::Params params, Eval eval, JetEval evalJet,
                std::optional<RationalLaurent> q, std::optional<double> v0) {
  return std::make_shared<IsotropicKernel>(std::move(name), std::move(params), std::move(eval),
                                           std::move(evalJet), std::move(q), v0);
}

}  // namespace

KernelPtr makeKernel(const std::string& name, const IsotropicKernel::Params& params) {
  if (name == "exponential") {
    checkParams(name, params, {});
    auto f = [](const auto& r) {
      using std::exp;
      return exp(-r);
    };
    RationalLaurent q = RationalLaurent::monomial(Rational(-1), 0);
    return build(name, params, f, f, q, 1.0);
  }
  if (name == "matern12") {
    checkParams(name, params, {"sigma", "rho"});
    const double s2 = param(params, "sigma", 1.0) * param(params, "sigma", 1.0);
    const double rho = param(params, "rho", 1.0);
    auto f = [s2, rho](const auto& r) {
      using std::exp;
      return s2 * exp(-(r / rho));
    };
    RationalLaurent q = RationalLaurent::monomial(-Rational(1) / exactOf(rho), 0);
    return build(name, params, f, f, q, s2);
  }
  if (name == "matern32") {
    checkParams(name, params, {"sigma", "rho"});
    const double s2 = param(params, "sigma", 1.0) * param(params, "sigma", 1.0);
    const double a = std::sqrt(3.0) / param(params, "rho", 1.0);
    auto f = [s2, a](const auto& r) {
      using std::exp;
      return s2 * (1.0 + a * r) * exp(-(a * r));
    };
    // K'/K = -a^2 r / (1 + a r) is not a Laurent polynomial, so no recurrence.
    return build(name, params, f, f, std::nullopt, s2);
  }
  if (name == "cauchy") {
    checkParams(name, params, {"sigma"});
    const double is2 = 1.0 / (param(params, "sigma", 1.0) * param(params, "sigma", 1.0));
    auto f = [is2](const auto& r) { return 1.0 / (1.0 + r * r * is2); };
    return build(name, params, f, f, std::nullopt, 1.0);
  }
  if (name == "rational-quadratic") {
    checkParams(name, params, {"sigma"});
    const double is2 = 1.0 / (param(params, "sigma", 1.0) * param(params, "sigma", 1.0));
    auto f = [is2](const auto& r) {
      using std::sqrt;
      return 1.0 / sqrt(1.0 + r * r * is2);
    };
    return build(name, params, f, f, std::nullopt, 1.0);
  }
  if (name == "gaussian") {
    checkParams(name, params, {});
    auto f = [](const auto& r) {
      using std::exp;
      return exp(-(r * r));
    };
    RationalLaurent q = RationalLaurent::monomial(Rational(-2), 1);
    return build(name, params, f, f, q, 1.0);
  }
  if (name == "inverse-r") {
    checkParams(name, params, {});
    auto feval = [](double r) { return 1.0 / r; };
    auto fjet = [](const Jet& r) { return recip(r); };
    RationalLaurent q = RationalLaurent::monomial(Rational(-1), -1);
    return build(name, params, feval, fjet, q, 0.0);
  }
  if (name == "inverse-r2") {
    checkParams(name, params, {});
    auto feval = [](double r) { return 1.0 / (r * r); };
    auto fjet = [](const Jet& r) { return recip(r * r); };
    RationalLaurent q = RationalLaurent::monomial(Rational(-2), -1);
    return build(name, params, feval, fjet, q, 0.0);
  }
  if (name == "inverse-r3") {
    checkParams(name, params, {});
    auto feval = [](double r) { return 1.0 / (r * r * r); };
    auto fjet = [](const Jet& r) { return recip(r * r * r); };
    RationalLaurent q = RationalLaurent::monomial(Rational(-3), -1);
    return build(name, params, feval, fjet, q, 0.0);
  }
  if (name == "exp-over-r") {
    checkParams(name, params, {});
    auto f = [](const auto& r) {
      using std::exp;
      return exp(-r) / r;
    };
    RationalLaurent q;
    q.add(0, Rational(-1));
    q.add(-1, Rational(-1));
    return build(name, params, f, f, q, 0.0);
  }
  if (name == "r-exp") {
    checkParams(name, params, {});
    auto f = [](const auto& r) {
      using std::exp;
      return r * exp(-r);
    };
    RationalLaurent q;
    q.add(-1, Rational(1));
    q.add(0, Rational(-1));
    return build(name, params, f, f, q, 0.0);
  }
  if (name == "cos-over-r") {
    checkParams(name, params, {});
    auto f = [](const auto& r) {
      using std::cos;
      return cos(r) / r;
    };
    return build(name, params, f, f, std::nullopt, 0.0);
  }
  if (name == "exp-neg-inv-r") {
    checkParams(name, params, {});
    auto f = [](const auto& r) {
      using std::exp;
      return exp(-(1.0 / r));
    };
    RationalLaurent q = RationalLaurent::monomial(Rational(1), -2);
    return build(name, params, f, f, q, 0.0);
  }
  if (name == "exp-neg-inv-r2") {
    checkParams(name, params, {});
    auto f = [](const auto& r) {
      using std::exp;
      return exp(-(1.0 / (r * r)));
    };
    RationalLaurent q = RationalLaurent::monomial(Rational(2), -3);
    return build(name, params, f, f, q, 0.0);
  }
  throw std::invalid_argument("unknown kernel '" + name + "'");
}

std::vector<std::string> builtinKernelNames() {
  return {"exponential", "matern12",  "matern32",   "cauchy",        "rational-quadratic",
          "gaussian",    "inverse-r", "inverse-r2", "inverse-r3",    "exp-over-r",
          "r-exp",       "cos-over-r", "exp-neg-inv-r", "exp-neg-inv-r2"};
}

std::optional<RationalLaurent> detectDerivativeRecurrence(const IsotropicKernel& kernel) {
  return kernel.derivativeRecurrence();
}

}  // namespace fkt
