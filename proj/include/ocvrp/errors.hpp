#ifndef OCVRP_ERRORS_HPP
#define OCVRP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ocvrp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A location or customer index outside the instance's valid range.
class InvalidIndex : public Error {
public:
    using Error::Error;
};

// Latitude/longitude outside [-90,90] x [-180,180].
class InvalidCoordinate : public Error {
public:
    using Error::Error;
};

// Bad magic, version, or schema in an input file.
class FormatError : public Error {
public:
    using Error::Error;
};

// A matrix file whose payload fails validation (size, NaN, negative, diagonal).
class CorruptMatrix : public Error {
public:
    using Error::Error;
};

// Cross-field mismatch, e.g. matrix order != location count.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// No feasible solution exists (or none was found under the mandated caps).
class Infeasible : public Error {
public:
    using Error::Error;
};

// Ant construction exhausted its attempt budget without a feasible completion.
class InfeasibleConstruction : public Infeasible {
public:
    using Infeasible::Infeasible;
};

// Pheromone deposit with a non-positive solution cost.
class InvalidCost : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace ocvrp

#endif
