#pragma once

#include "wbfv/models.hpp"

namespace wbfv {

struct ViscosityRule {
  enum class Kind { FixedK, LocalMax };
  Kind kind = Kind::LocalMax;
  Real k = 0.0;

  static ViscosityRule fixed(Real k);
  static ViscosityRule local_max() { return {Kind::LocalMax, 0.0}; }

  /// |c| for transport, LocalMax otherwise.
  static ViscosityRule default_for(const Model& model);
};

/// 1/2 (f(uL) + f(uR)) - k/2 (uR - uL).
StateVector rusanov(const Model& model, const StateVector& uL, const StateVector& uR, const ViscosityRule& rule);

/// Rusanov flux for one part of a split. Parts that carry the whole flux
/// (Full, or the flux-bearing part of a degenerate split) use `rule`; the
/// pressure split gives each part the spectral bound of its own Jacobian,
/// maximised over both states.
StateVector split_rusanov(const Model& model, Part part, const SplitSpec& spec, const StateVector& uL,
                          const StateVector& uR, const ViscosityRule& rule);

}  // namespace wbfv
