#pragma once

#include <stdexcept>
#include <string>

namespace mixlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// graph construction / io
struct SelfLoop : Error { using Error::Error; };
struct DuplicateEdge : Error { using Error::Error; };
struct NonPositiveWeight : Error { using Error::Error; };
struct DisconnectedGraph : Error { using Error::Error; };
struct BadMetric : Error { using Error::Error; };

struct ParseError : Error {
  long line;
  ParseError(long line_, const std::string& what)
      : Error("parse error at line " + std::to_string(line_) + ": " + what), line(line_) {}
};

// kernels / mixing times
struct NotMixedWithinHorizon : Error { using Error::Error; };
struct SizeLimitExceeded : Error { using Error::Error; };

// resistance
struct OverlappingSets : Error { using Error::Error; };
struct VertexInTargets : Error { using Error::Error; };
struct EmptyComplement : Error { using Error::Error; };

// bounds
struct BallIsWholeGraph : Error { using Error::Error; };
struct PreconditionFailed : Error {
  std::string clause;
  explicit PreconditionFailed(const std::string& clause_)
      : Error("precondition failed: " + clause_), clause(clause_) {}
};
struct UnknownFamily : Error { using Error::Error; };
struct InsufficientDraws : Error { using Error::Error; };
struct InsufficientSizes : Error { using Error::Error; };

// ensembles
struct DimensionTooLow : Error { using Error::Error; };
struct SamplingBudgetExceeded : Error { using Error::Error; };

// sgh metric
struct GridMismatch : Error { using Error::Error; };
struct AmbientTooLargeForExact : Error { using Error::Error; };
struct BadCorrespondence : Error { using Error::Error; };

}  // namespace mixlab
