#include "wbfv/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "wbfv/errors.hpp"

namespace wbfv {

namespace {

constexpr Real kPi = std::numbers::pi;
constexpr Real kE = std::numbers::e;

}  // namespace

Real DepthFunction::value(Real x) const {
  switch (kind) {
    case DepthKind::Flat:
      return level;
    case DepthKind::CosBump:
      if (x >= 1.3 && x <= 1.7) return -0.25 * (1.0 + std::cos(5.0 * kPi * (x + 0.5)));
      return 0.0;
    case DepthKind::Gaussian:
      return 1.0 - 0.5 * std::exp(-x * x);
    case DepthKind::ExpCos:
      return 1.0 - 0.5 * (std::exp(std::cos(4.0 * kPi * x)) - 1.0 / kE) / (kE - 1.0 / kE);
  }
  return 0.0;
}

Real DepthFunction::derivative(Real x) const {
  switch (kind) {
    case DepthKind::Flat:
      return 0.0;
    case DepthKind::CosBump:
      if (x >= 1.3 && x <= 1.7) return 0.25 * 5.0 * kPi * std::sin(5.0 * kPi * (x + 0.5));
      return 0.0;
    case DepthKind::Gaussian:
      return x * std::exp(-x * x);
    case DepthKind::ExpCos:
      return 2.0 * kPi * std::sin(4.0 * kPi * x) * std::exp(std::cos(4.0 * kPi * x)) / (kE - 1.0 / kE);
  }
  return 0.0;
}

std::string to_string(DepthKind k) {
  switch (k) {
    case DepthKind::Flat: return "flat";
    case DepthKind::CosBump: return "cosbump";
    case DepthKind::Gaussian: return "gaussian";
    case DepthKind::ExpCos: return "expcos";
  }
  return "?";
}

DepthKind parse_depth_kind(const std::string& s) {
  if (s == "flat") return DepthKind::Flat;
  if (s == "cosbump") return DepthKind::CosBump;
  if (s == "gaussian") return DepthKind::Gaussian;
  if (s == "expcos") return DepthKind::ExpCos;
  throw ConfigError("unknown depth function '" + s + "'");
}

Model::Model(TransportModel m) : m_(m) {
  if (m.c == 0.0 || !std::isfinite(m.c)) throw ConfigError("transport: advection speed must be non-zero");
}
Model::Model(BurgersModel m) : m_(m) {
  if (!std::isfinite(m.alpha)) throw ConfigError("burgers: alpha must be finite");
}
Model::Model(ShallowWaterModel m) : m_(m) {
  if (!(m.g > 0.0)) throw ConfigError("shallow water: gravity must be positive");
  if (m.manning_k < 0.0) throw ConfigError("shallow water: friction coefficient must be >= 0");
}

std::string Model::name() const {
  switch (kind()) {
    case ModelKind::Transport: return "transport";
    case ModelKind::Burgers: return "burgers";
    case ModelKind::ShallowWater: return "swe";
  }
  return "?";
}

void Model::validate(const StateVector& u) const {
  if (u.size() != components() || !u.all_finite()) throw StateError("state: non-finite or wrong component count");
  if (kind() == ModelKind::ShallowWater && !(u[0] > 0.0)) {
    std::ostringstream os;
    os << "shallow water: non-positive thickness h = " << u[0];
    throw StateError(os.str());
  }
}

StateVector Model::flux(const StateVector& u) const {
  switch (kind()) {
    case ModelKind::Transport:
      return StateVector(std::get<TransportModel>(m_).c * u[0]);
    case ModelKind::Burgers:
      return StateVector(0.5 * u[0] * u[0]);
    case ModelKind::ShallowWater: {
      validate(u);
      const auto& sw = std::get<ShallowWaterModel>(m_);
      const Real h = u[0], q = u[1];
      return {q, q * q / h + 0.5 * sw.g * h * h};
    }
  }
  return u;
}

StateVector Model::source_geom(const StateVector& u) const {
  switch (kind()) {
    case ModelKind::Transport:
      return StateVector(std::get<TransportModel>(m_).alpha * u[0]);
    case ModelKind::Burgers:
      return StateVector(std::get<BurgersModel>(m_).alpha * u[0] * u[0]);
    case ModelKind::ShallowWater:
      return {0.0, std::get<ShallowWaterModel>(m_).g * u[0]};
  }
  return u;
}

StateVector Model::source_plain(const StateVector& u) const {
  if (kind() != ModelKind::ShallowWater) return StateVector::zeros(1);
  const auto& sw = std::get<ShallowWaterModel>(m_);
  if (sw.manning_k == 0.0) return StateVector::zeros(2);
  validate(u);
  const Real h = u[0], q = u[1];
  return {0.0, -sw.manning_k * q * std::abs(q) / std::pow(h, sw.mu)};
}

Real Model::depth(Real x) const {
  if (kind() == ModelKind::ShallowWater) return std::get<ShallowWaterModel>(m_).depth.value(x);
  return x;
}

Real Model::depth_slope(Real x) const {
  if (kind() == ModelKind::ShallowWater) return std::get<ShallowWaterModel>(m_).depth.derivative(x);
  return 1.0;
}

Real Model::max_wave_speed(const StateVector& u) const {
  switch (kind()) {
    case ModelKind::Transport:
      return std::abs(std::get<TransportModel>(m_).c);
    case ModelKind::Burgers:
      return std::abs(u[0]);
    case ModelKind::ShallowWater: {
      validate(u);
      const auto& sw = std::get<ShallowWaterModel>(m_);
      return std::abs(u[1] / u[0]) + std::sqrt(sw.g * u[0]);
    }
  }
  return 0.0;
}

StateVector Model::stationary_slope(const StateVector& u, Real x) const {
  switch (kind()) {
    case ModelKind::Transport: {
      const auto& t = std::get<TransportModel>(m_);
      return StateVector(t.alpha / t.c * u[0]);
    }
    case ModelKind::Burgers:
      return StateVector(std::get<BurgersModel>(m_).alpha * u[0]);
    case ModelKind::ShallowWater: {
      validate(u);
      const auto& sw = std::get<ShallowWaterModel>(m_);
      const Real h = u[0], q = u[1];
      const Real gh = sw.g * h;
      const Real v2 = (q / h) * (q / h);
      const Real denom = gh - v2;
      if (std::abs(denom) <= kCriticalTolerance * std::max(gh, v2)) {
        std::ostringstream os;
        os << "stationary slope: critical point at x = " << x << " (h = " << h << ", q = " << q << ")";
        throw CriticalPointError(os.str());
      }
      Real numer = gh * sw.depth.derivative(x);
      if (sw.manning_k != 0.0) numer -= sw.manning_k * q * std::abs(q) / std::pow(h, sw.mu);
      return {numer / denom, 0.0};
    }
  }
  return u;
}

Real froude(const ShallowWaterModel& model, const StateVector& u) {
  if (!(u[0] > 0.0)) throw StateError("froude: non-positive thickness");
  return std::abs(u[1] / u[0]) / std::sqrt(model.g * u[0]);
}

std::string to_string(SplitRegime r) {
  switch (r) {
    case SplitRegime::FullyImplicit: return "fully-implicit";
    case SplitRegime::SemiImplicitPressure: return "semi-implicit-pressure";
    case SplitRegime::SemiImplicitFriction: return "semi-implicit-friction";
  }
  return "?";
}

SplitSpec split(const Model& model, SplitRegime regime) {
  if (regime != SplitRegime::FullyImplicit) {
    const auto* sw = model.shallow_water();
    if (!sw) throw ConfigError("split: semi-implicit regimes need the shallow water model");
    if (regime == SplitRegime::SemiImplicitFriction && sw->manning_k == 0.0)
      throw ConfigError("split: friction splitting on a frictionless model");
  }
  return SplitSpec{regime};
}

StateVector SplitSpec::flux(const Model& model, const StateVector& u, Part part) const {
  if (part == Part::Full) return model.flux(u);
  switch (regime) {
    case SplitRegime::FullyImplicit:
      return part == Part::Implicit ? model.flux(u) : StateVector::zeros(model.components());
    case SplitRegime::SemiImplicitPressure: {
      model.validate(u);
      const Real h = u[0], q = u[1];
      if (part == Part::Explicit) return {0.0, q * q / h};
      return {q, 0.5 * model.shallow_water()->g * h * h};
    }
    case SplitRegime::SemiImplicitFriction:
      return part == Part::Explicit ? model.flux(u) : StateVector::zeros(model.components());
  }
  return model.flux(u);
}

StateVector SplitSpec::source_geom(const Model& model, const StateVector& u, Part part) const {
  const bool explicit_geom = regime == SplitRegime::SemiImplicitFriction;
  if (part == Part::Full || (part == Part::Explicit) == explicit_geom) return model.source_geom(u);
  return StateVector::zeros(model.components());
}

StateVector SplitSpec::source_plain(const Model& model, const StateVector& u, Part part) const {
  if (part == Part::Explicit) return StateVector::zeros(model.components());
  return model.source_plain(u);
}

Real SplitSpec::wave_speed(const Model& model, const StateVector& u, Part part) const {
  if (part == Part::Full) return model.max_wave_speed(u);
  switch (regime) {
    case SplitRegime::FullyImplicit:
      return part == Part::Implicit ? model.max_wave_speed(u) : 0.0;
    case SplitRegime::SemiImplicitPressure:
      model.validate(u);
      if (part == Part::Explicit) return std::abs(u[1] / u[0]);
      return std::sqrt(model.shallow_water()->g * u[0]);
    case SplitRegime::SemiImplicitFriction:
      return part == Part::Explicit ? model.max_wave_speed(u) : 0.0;
  }
  return model.max_wave_speed(u);
}

}  // namespace wbfv
