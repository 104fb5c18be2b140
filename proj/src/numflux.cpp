#include "wbfv/numflux.hpp"

#include <cmath>

#include "wbfv/errors.hpp"

namespace wbfv {

ViscosityRule ViscosityRule::fixed(Real k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("viscosity: fixed k must be positive");
  return {Kind::FixedK, k};
}

ViscosityRule ViscosityRule::default_for(const Model& model) {
  if (const auto* t = model.transport()) return fixed(std::abs(t->c));
  return local_max();
}

StateVector rusanov(const Model& model, const StateVector& uL, const StateVector& uR, const ViscosityRule& rule) {
  const Real k = rule.kind == ViscosityRule::Kind::FixedK
                     ? rule.k
                     : std::max(model.max_wave_speed(uL), model.max_wave_speed(uR));
  return 0.5 * (model.flux(uL) + model.flux(uR)) - (0.5 * k) * (uR - uL);
}

StateVector split_rusanov(const Model& model, Part part, const SplitSpec& spec, const StateVector& uL,
                          const StateVector& uR, const ViscosityRule& rule) {
  if (part == Part::Full) return rusanov(model, uL, uR, rule);
  switch (spec.regime) {
    case SplitRegime::FullyImplicit:
      return part == Part::Implicit ? rusanov(model, uL, uR, rule) : StateVector::zeros(model.components());
    case SplitRegime::SemiImplicitFriction:
      return part == Part::Explicit ? rusanov(model, uL, uR, rule) : StateVector::zeros(model.components());
    case SplitRegime::SemiImplicitPressure: {
      const Real k = std::max(spec.wave_speed(model, uL, part), spec.wave_speed(model, uR, part));
      return 0.5 * (spec.flux(model, uL, part) + spec.flux(model, uR, part)) - (0.5 * k) * (uR - uL);
    }
  }
  return rusanov(model, uL, uR, rule);
}

}  // namespace wbfv
