#pragma once

#include <array>
#include <vector>

#include "pmldd/types.hpp"

namespace pmldd {

enum class StretchKind { None, SigmaM1, SigmaM2 };

/// One absorbing layer along a single axis. The layer runs from `start` (where
/// the stretching switches on) to `end` (the pole, usually a PEC face). The
/// layer is increasing when end > start.
///
///   SigmaM1: sigma(t) = 1 / d
///   SigmaM2: sigma(t) = m2_constant / d^2
///
/// with d = |end - t| the distance to the pole.
struct StretchProfile {
  StretchKind kind = StretchKind::None;
  double start = 0.0;
  double end = 0.0;
  double m2_constant = 2.0;

  double thickness() const { return end > start ? end - start : start - end; }
  bool increasing() const { return end > start; }
  /// True when the open interval (lo, hi) intersects the layer.
  bool overlaps(double lo, double hi) const;
  void validate() const;
};

/// Stretching function value; zero outside [start, end). Throws at the pole.
double sigma_eval(const StretchProfile& profile, double t);

/// s = 1 - (i / omega) sigma.
Complex stretch_factor(double sigma_value, double omega);

struct StretchState {
  CVec3 s{Complex(1.0), Complex(1.0), Complex(1.0)};
};

/// Diagonal material tensors equivalent to complex coordinate stretching:
/// mass = (sy sz / sx, sz sx / sy, sx sy / sz), curl = 1 / mass.
struct PmlTensors {
  CVec3 curl{Complex(1.0), Complex(1.0), Complex(1.0)};
  CVec3 mass{Complex(1.0), Complex(1.0), Complex(1.0)};
};

PmlTensors pml_tensors(const StretchState& state);

/// All stretching layers of a problem, grouped by axis. Layers on the same
/// axis add their sigma values.
class StretchField {
 public:
  void add(int axis, const StretchProfile& profile);
  bool empty() const;
  const std::vector<StretchProfile>& layers(int axis) const { return layers_[axis]; }

  double sigma(int axis, double t) const;
  StretchState state_at(const Vec3& x, double omega) const;
  /// False when no layer touches the open box (lo, hi); the tensors are then
  /// exactly the identity everywhere inside it.
  bool touches(const Vec3& lo, const Vec3& hi) const;

 private:
  std::array<std::vector<StretchProfile>, 3> layers_;
};

}  // namespace pmldd
