#ifndef FKT_KERNELS_HPP
#define FKT_KERNELS_HPP

// Isotropic kernels K(r). Each kernel evaluates both in double and in jet
// arithmetic (same formula, so jets deliver K^(m)(r) to high order), carries
// an optional registered derivative recurrence K'(r) = q(r) K(r) with exact
// rational q, and a value-at-zero convention for the matrix diagonal.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fkt/jet.hpp"
#include "fkt/laurent.hpp"

namespace fkt {

class SingularAtZeroError : public std::domain_error {
 public:
  explicit SingularAtZeroError(const std::string& name)
      : std::domain_error("kernel '" + name + "' is singular at r = 0 and no diagonal convention is set") {}
};

class IsotropicKernel {
 public:
  using Params = std::map<std::string, double>;

  IsotropicKernel(std::string name, Params params,
                  std::function<double(double)> eval,
                  std::function<Jet(const Jet&)> evalJet,
                  std::optional<RationalLaurent> recurrence,
                  std::optional<double> valueAtZero)
      : name_(std::move(name)),
        params_(std::move(params)),
        eval_(std::move(eval)),
        evalJet_(std::move(evalJet)),
        recurrence_(std::move(recurrence)),
        valueAtZero_(valueAtZero) {}

  const std::string& name() const { return name_; }
  const Params& parameters() const { return params_; }

  // K(r) for r > 0; at r = 0 the diagonal convention applies. An explicit
  // override takes precedence over the registered convention.
  double operator()(double r, std::optional<double> diagonalOverride = std::nullopt) const {
    if (r == 0.0) {
      if (diagonalOverride) return *diagonalOverride;
      if (valueAtZero_) return *valueAtZero_;
      throw SingularAtZeroError(name_);
    }
    return eval_(r);
  }

  double evalPositive(double r) const { return eval_(r); }

  // Jet of K at center r > 0: coefficient m is K^(m)(r) / m!.
  Jet jetAt(double r, int order) const {
    if (r <= 0.0) throw std::invalid_argument("kernel jet requires r > 0");
    return evalJet_(Jet::variable(r, order));
  }

  Jet evalJet(const Jet& r) const { return evalJet_(r); }

  const std::optional<RationalLaurent>& derivativeRecurrence() const { return recurrence_; }
  std::optional<double> valueAtZero() const { return valueAtZero_; }

 private:
  std::string name_;
  Params params_;
  std::function<double(double)> eval_;
  std::function<Jet(const Jet&)> evalJet_;
  std::optional<RationalLaurent> recurrence_;
  std::optional<double> valueAtZero_;
};

using KernelPtr = std::shared_ptr<const IsotropicKernel>;

// Factory for the built-in kernel set. Unknown parameter names throw.
KernelPtr makeKernel(const std::string& name, const IsotropicKernel::Params& params = {});

std::vector<std::string> builtinKernelNames();

// Registered derivative recurrence, if any (registration-based; no symbolic
// inference happens here).
std::optional<RationalLaurent> detectDerivativeRecurrence(const IsotropicKernel& kernel);

}  // namespace fkt

#endif
