#pragma once

#include <stdexcept>
#include <string>

namespace mlfc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// topology
struct BadShape : Error { using Error::Error; };
struct PartitionViolation : Error { using Error::Error; };
struct CycleDetected : Error { using Error::Error; };
struct NotATree : Error { using Error::Error; };
struct BadStrategy : Error { using Error::Error; };

// channel
struct DegenerateModel : Error { using Error::Error; };

// functions
struct AlphabetViolation : Error { using Error::Error; };

// rates
struct EmptySubgroup : Error { using Error::Error; };
struct SimplexViolation : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };

// allocation
struct DomainError : Error { using Error::Error; };
struct NoSolution : Error { using Error::Error; };
struct DegenerateInput : Error { using Error::Error; };
struct ZeroGain : Error { using Error::Error; };

// experiments
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace mlfc
