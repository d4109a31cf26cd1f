#pragma once

namespace biphoton {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kSqrt2 = 1.414213562373095048801688724209698079;

/// Wavelengths are kept in um; wave numbers in cm^-1.
inline constexpr double um_to_cm(double um) noexcept { return um * 1e-4; }

}  // namespace biphoton
