#pragma once
#include <stdexcept>
#include <string>

namespace fsekit {

/// Base class for every error this library throws on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroEnergyUnsupported : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct RootIsolationFailure : Error { using Error::Error; };
struct TruncationWarning : Error { using Error::Error; };
struct BranchAnchorTooLow : Error { using Error::Error; };
struct PhaseUnwrapFailure : Error { using Error::Error; };
struct SingularPencil : Error { using Error::Error; };
struct MissedRootSuspected : Error { using Error::Error; };
struct OdeStepFailure : Error { using Error::Error; };
struct NuOnEigenvalue : Error { using Error::Error; };
struct InsufficientSpectrum : Error { using Error::Error; };
struct EigenvalueOutOfRange : Error { using Error::Error; };
struct SingularShift : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };
struct SpectralCollision : Error { using Error::Error; };
struct SupportViolation : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

} // namespace fsekit
