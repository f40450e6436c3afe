#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sinhlab {

/// Failure categories raised across the library. Every thrown Error carries
/// one of these so callers (and the CLI) can branch on the kind without
/// parsing messages.
enum class Errc {
  Singularity,
  OutOfDomain,
  SeriesNotConverged,
  MeshTooCoarse,
  PointsTooClose,
  NoConvergence,
  LeftDomain,
  RhoTooLarge,
  TooCloseToPeak,
  ResolutionInvalid,
  NewtonDiverged,
  JacobianSingular,
  ContinuationBroken,
  ExponentOverflow,
  EigSolverFailure,
  ZeroField,
  SpectrumTruncated,
  InsufficientSamples,
  RegimeMismatch,
  InsufficientData,
  MissingFits,
  QuadratureFailure,
  BallNotAdmissible,
  IncompleteRuns,
  InvalidArgument,
  ConfigInvalid,
  Io,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sinhlab
