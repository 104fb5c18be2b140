#pragma once

#include <string>
#include <variant>

#include "wbfv/state.hpp"

namespace wbfv {

enum class DepthKind { Flat, CosBump, Gaussian, ExpCos };

/// Analytic depth function H(x) with closed-form derivative.
///
///  - CosBump:  H = -0.25 (1 + cos(5 pi (x + 0.5))) on [1.3, 1.7], 0 elsewhere
///  - Gaussian: H = 1 - 0.5 exp(-x^2)
///  - ExpCos:   H = 1 - 0.5 (exp(cos(4 pi x)) - 1/e) / (e - 1/e)
///  - Flat:     H = level
struct DepthFunction {
  DepthKind kind = DepthKind::Flat;
  Real level = 0.0;

  static DepthFunction flat(Real level = 0.0) { return {DepthKind::Flat, level}; }
  static DepthFunction cos_bump() { return {DepthKind::CosBump, 0.0}; }
  static DepthFunction gaussian() { return {DepthKind::Gaussian, 0.0}; }
  static DepthFunction exp_cos() { return {DepthKind::ExpCos, 0.0}; }

  Real value(Real x) const;
  Real derivative(Real x) const;
};

std::string to_string(DepthKind k);
DepthKind parse_depth_kind(const std::string& s);

/// u_t + c u_x = alpha u
struct TransportModel {
  Real c = 1.0;
  Real alpha = 1.0;
};

/// u_t + (u^2/2)_x = alpha u^2
struct BurgersModel {
  Real alpha = 1.0;
};

/// Shallow water with Manning friction, state (h, q):
///   f = (q, q^2/h + g h^2/2),  S_geom = (0, g h),  S_plain = (0, -k q|q| / h^mu)
struct ShallowWaterModel {
  Real g = 9.81;
  Real manning_k = 0.0;
  Real mu = 7.0 / 3.0;
  DepthFunction depth = DepthFunction::flat();
};

enum class ModelKind { Transport, Burgers, ShallowWater };

/// Balance law u_t + f(u)_x = S_geom(u) H_x + S_plain(u).
///
/// Transport and Burgers use H(x) = x, so H_x = 1 and the whole source lives
/// in S_geom.
class Model {
 public:
  Model(TransportModel m);  // NOLINT(google-explicit-constructor)
  Model(BurgersModel m);    // NOLINT(google-explicit-constructor)
  Model(ShallowWaterModel m);  // NOLINT(google-explicit-constructor)

  ModelKind kind() const noexcept { return static_cast<ModelKind>(m_.index()); }
  std::size_t components() const noexcept { return kind() == ModelKind::ShallowWater ? 2 : 1; }
  std::string name() const;

  const TransportModel* transport() const { return std::get_if<TransportModel>(&m_); }
  const BurgersModel* burgers() const { return std::get_if<BurgersModel>(&m_); }
  const ShallowWaterModel* shallow_water() const { return std::get_if<ShallowWaterModel>(&m_); }

  /// Throws StateError for inadmissible states.
  void validate(const StateVector& u) const;

  StateVector flux(const StateVector& u) const;
  StateVector source_geom(const StateVector& u) const;
  StateVector source_plain(const StateVector& u) const;
  Real depth(Real x) const;
  Real depth_slope(Real x) const;
  Real max_wave_speed(const StateVector& u) const;

  /// du/dx along a stationary solution through u at x; throws CriticalPointError
  /// when the shallow-water denominator g h - u^2 vanishes.
  StateVector stationary_slope(const StateVector& u, Real x) const;

  /// Relative threshold on |g h - u^2| below which the flow counts as critical.
  static constexpr Real kCriticalTolerance = 1e-10;

 private:
  std::variant<TransportModel, BurgersModel, ShallowWaterModel> m_;
};

Real froude(const ShallowWaterModel& model, const StateVector& u);

enum class SplitRegime { FullyImplicit, SemiImplicitPressure, SemiImplicitFriction };
enum class Part { Full, Explicit, Implicit };

std::string to_string(SplitRegime r);

/// Assignment of flux and source terms to the explicit and implicit parts.
///
///  - FullyImplicit: everything implicit.
///  - SemiImplicitPressure: f1 = (0, q^2/h) explicit; f2 = (q, g h^2/2), g h H_x
///    and friction implicit.
///  - SemiImplicitFriction: flux and g h H_x explicit; friction implicit.
struct SplitSpec {
  SplitRegime regime = SplitRegime::FullyImplicit;

  StateVector flux(const Model& model, const StateVector& u, Part part) const;
  StateVector source_geom(const Model& model, const StateVector& u, Part part) const;
  StateVector source_plain(const Model& model, const StateVector& u, Part part) const;

  /// Spectral bound of the part's own flux Jacobian.
  Real wave_speed(const Model& model, const StateVector& u, Part part) const;
};

/// Validates the regime against the model.
SplitSpec split(const Model& model, SplitRegime regime);

}  // namespace wbfv
