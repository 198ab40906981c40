#include "pmldd/pml.hpp"

#include <algorithm>

namespace pmldd {

bool StretchProfile::overlaps(double lo, double hi) const {
  if (kind == StretchKind::None) return false;
  const double a = std::min(start, end);
  const double b = std::max(start, end);
  return lo < b && hi > a;
}

void StretchProfile::validate() const {
  if (kind == StretchKind::None) return;
  if (!(thickness() > 0.0)) throw Error("PML layer needs a positive thickness");
  if (kind == StretchKind::SigmaM2 && !(m2_constant > 0.0)) throw Error("sigma_-2 constant must be positive");
}

double sigma_eval(const StretchProfile& profile, double t) {
  if (profile.kind == StretchKind::None) return 0.0;
  // Distance to the pole, positive inside the layer.
  const double d = profile.increasing() ? profile.end - t : t - profile.end;
  const double from_start = profile.increasing() ? t - profile.start : profile.start - t;
  if (from_start < 0.0 || d < 0.0) return 0.0;
  if (d == 0.0) throw Error("stretching function evaluated at its pole");
  if (profile.kind == StretchKind::SigmaM1) return 1.0 / d;
  return profile.m2_constant / (d * d);
}

Complex stretch_factor(double sigma_value, double omega) { return Complex(1.0, -sigma_value / omega); }

PmlTensors pml_tensors(const StretchState& state) {
  const auto& [sx, sy, sz] = state.s;
  PmlTensors t;
  if (sx == 1.0 && sy == 1.0 && sz == 1.0) return t;
  t.mass = {sy * sz / sx, sz * sx / sy, sx * sy / sz};
  t.curl = {sx / (sy * sz), sy / (sz * sx), sz / (sx * sy)};
  return t;
}

void StretchField::add(int axis, const StretchProfile& profile) {
  profile.validate();
  if (profile.kind != StretchKind::None) layers_[axis].push_back(profile);
}

bool StretchField::empty() const {
  return layers_[0].empty() && layers_[1].empty() && layers_[2].empty();
}

double StretchField::sigma(int axis, double t) const {
  double s = 0.0;
  for (const auto& p : layers_[axis]) s += sigma_eval(p, t);
  return s;
}

StretchState StretchField::state_at(const Vec3& x, double omega) const {
  StretchState st;
  for (int d = 0; d < 3; ++d) {
    if (layers_[d].empty()) continue;
    const double sg = sigma(d, x[d]);
    if (sg != 0.0) st.s[d] = stretch_factor(sg, omega);
  }
  return st;
}

bool StretchField::touches(const Vec3& lo, const Vec3& hi) const {
  for (int d = 0; d < 3; ++d)
    for (const auto& p : layers_[d])
      if (p.overlaps(lo[d], hi[d])) return true;
  return false;
}

}  // namespace pmldd
