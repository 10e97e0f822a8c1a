#pragma once

#include <stdexcept>
#include <string_view>

namespace bilocal {

/// Thrown when a parameter record violates a physical or domain constraint.
/// The message names the violated constraint.
class InvalidParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Half-width of the band around a threshold that is reported as Boundary.
inline constexpr double kThresholdBand = 1e-9;

/// Radicands down to -kRadicandNoise are treated as float noise and clamped to 0.
inline constexpr double kRadicandNoise = 1e-12;

/// Outcome of comparing a value with a threshold where "above" means the
/// nonclassical side (CHSH-nonlocal, nonbilocal, ...).
enum class Verdict { Below, Boundary, Above };

inline Verdict compare_to_threshold(double value, double threshold) {
  if (value > threshold + kThresholdBand) return Verdict::Above;
  if (value < threshold - kThresholdBand) return Verdict::Below;
  return Verdict::Boundary;
}

std::string_view to_string(Verdict v);

/// sqrt with noise clamping: values in [-kRadicandNoise, 0) map to 0 and set
/// *clamped; more negative values throw InvalidParameters naming `what`.
double checked_sqrt(double radicand, std::string_view what, bool* clamped = nullptr);

}  // namespace bilocal
