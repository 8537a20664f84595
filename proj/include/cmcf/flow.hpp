// Normal-velocity laws v = -kappa + F.
#pragma once

#include "cmcf/curve.hpp"

#include <stdexcept>
#include <string_view>

namespace cmcf {

template <typename Scalar>
struct FlowModel {
  enum class Law { curve_shortening, constant_force, area_preserving };

  Law law = Law::curve_shortening;
  Scalar force = 0;  ///< only read for constant_force

  static FlowModel curve_shortening() { return {Law::curve_shortening, Scalar(0)}; }
  static FlowModel constant_force(Scalar f) { return {Law::constant_force, f}; }
  static FlowModel area_preserving() { return {Law::area_preserving, Scalar(0)}; }

  friend bool operator==(const FlowModel&, const FlowModel&) = default;
};

template <typename Scalar>
std::string_view law_name(const FlowModel<Scalar>& model) {
  switch (model.law) {
    case FlowModel<Scalar>::Law::curve_shortening: return "csf";
    case FlowModel<Scalar>::Law::constant_force: return "constant";
    case FlowModel<Scalar>::Law::area_preserving: return "area_preserving";
  }
  return "unknown";
}

/// Length-weighted mean curvature
///   F = sum_j kappa_j (d_j + d_{j+1}) / 2  /  sum_j d_j,
/// with the same periodic wraparound as the geometry (d_{M+1} := d_1).
template <typename Scalar>
Scalar nonlocal_force(const Vector<Scalar>& kappa, const Vector<Scalar>& d) {
  if (kappa.size() != d.size()) {
    throw std::invalid_argument("curvature and segment length sequences differ in size");
  }
  return kappa.dot(dual_lengths(d)) / d.sum();
}

template <typename Scalar>
Scalar forcing_value(const FlowModel<Scalar>& model, const Vector<Scalar>& kappa,
                     const Vector<Scalar>& d) {
  switch (model.law) {
    case FlowModel<Scalar>::Law::curve_shortening: return Scalar(0);
    case FlowModel<Scalar>::Law::constant_force: return model.force;
    case FlowModel<Scalar>::Law::area_preserving: return nonlocal_force(kappa, d);
  }
  return Scalar(0);
}

}  // namespace cmcf
