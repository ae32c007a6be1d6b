#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lteu {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (rule DSL, scenario file).
class ParseError : public Error
{
public:
  using Error::Error;
};

/// Invalid configuration values detected before a run starts.
class ConfigError : public Error
{
public:
  using Error::Error;
};

/// A registry operation attempted by someone without admin rights.
class PermissionError : public Error
{
public:
  using Error::Error;
};

enum class CellId : std::int32_t {};
enum class UeId : std::int32_t {};

constexpr std::int32_t
to_int(CellId id)
{
  return static_cast<std::int32_t>(id);
}

constexpr std::int32_t
to_int(UeId id)
{
  return static_cast<std::int32_t>(id);
}

enum class CellKind { macro_enb, lteu_microcell };
enum class Carrier { licensed, unlicensed };
enum class TrafficClass { real_time, non_real_time };

const char* to_string(CellKind kind);
const char* to_string(TrafficClass traffic);

/// Planar position or velocity.
struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend bool operator==(Vec2, Vec2) = default;

  double norm() const { return std::hypot(x, y); }
};

inline double
distance(Vec2 a, Vec2 b)
{
  return (a - b).norm();
}

constexpr double kKmhPerMps = 3.6;

} // namespace lteu
