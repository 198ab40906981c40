#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pmldd {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;
using CVec3 = std::array<Complex, 3>;
using Index3 = std::array<int, 3>;

/// Faces of an axis-aligned box, ordered x-, x+, y-, y+, z-, z+.
enum class Face : int { XMinus = 0, XPlus, YMinus, YPlus, ZMinus, ZPlus };

inline constexpr std::array<Face, 6> kAllFaces = {Face::XMinus, Face::XPlus, Face::YMinus,
                                                  Face::YPlus,  Face::ZMinus, Face::ZPlus};

constexpr int face_axis(Face f) { return static_cast<int>(f) / 2; }
constexpr bool face_is_upper(Face f) { return static_cast<int>(f) % 2 == 1; }
constexpr Face make_face(int axis, bool upper) { return static_cast<Face>(2 * axis + (upper ? 1 : 0)); }

enum class GlobalBc { Impedance, Pml };
enum class InterfaceCondition { Impedance, Pml };

/// Raised for invalid input and failed numerical preconditions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_string(GlobalBc bc);
std::string to_string(InterfaceCondition ic);

}  // namespace pmldd
