#pragma once

#include <stdexcept>
#include <string>

namespace smv {

// Base for every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed data: shape mismatch, non-finite entries, negative X, infeasible start.
class InvalidInput : public Error {
public:
    using Error::Error;
};

// Parameter outside its admissible range (delta <= 0, r out of range, ...).
class InvalidParameter : public Error {
public:
    using Error::Error;
};

// Cholesky met a non-positive pivot.
class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

// lambda_from_init with log det(W0'W0 + delta I) == 0.
class DegenerateDenominator : public Error {
public:
    using Error::Error;
};

// rel-RMSE against an all-zero reference.
class UndefinedMetric : public Error {
public:
    using Error::Error;
};

// A solver produced a non-finite objective.
class NumericalFault : public Error {
public:
    using Error::Error;
};

}  // namespace smv
