// SPDX-License-Identifier: Apache-2.0
//
// Shared types, error classes and unit helpers for the STAR-RIS V2X lab.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace starris {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Rng = std::mt19937_64;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define STARRIS_DEFINE_ERROR(Name) \
  class Name : public Error {      \
   public:                         \
    using Error::Error;            \
  }

STARRIS_DEFINE_ERROR(ConfigError);
STARRIS_DEFINE_ERROR(InsufficientVehicles);
STARRIS_DEFINE_ERROR(DegenerateGeometry);
STARRIS_DEFINE_ERROR(IndexOutOfRange);
STARRIS_DEFINE_ERROR(OffGridIncrement);
STARRIS_DEFINE_ERROR(InvalidProbability);
STARRIS_DEFINE_ERROR(InvalidAllocation);
STARRIS_DEFINE_ERROR(InvalidAction);
STARRIS_DEFINE_ERROR(ShapeMismatch);
STARRIS_DEFINE_ERROR(NonFiniteValue);
STARRIS_DEFINE_ERROR(BufferUnderflow);
STARRIS_DEFINE_ERROR(DegenerateExpansionPoint);
STARRIS_DEFINE_ERROR(SpaceTooLarge);
STARRIS_DEFINE_ERROR(FormatError);

#undef STARRIS_DEFINE_ERROR

// All internal math runs in linear SI units; these are the only dB conversions.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

// splitmix64 finalizer; used to derive independent, reproducible stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <typename... Keys>
std::uint64_t derive_seed(std::uint64_t base, Keys... keys) {
  std::uint64_t s = mix_seed(base);
  ((s = mix_seed(s ^ static_cast<std::uint64_t>(keys))), ...);
  return s;
}

}  // namespace starris
